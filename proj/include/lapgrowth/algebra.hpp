#pragma once

// Sandpile group of a finite connected multigraph with a sink.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lapgrowth/stats.hpp"

namespace lapgrowth {

using BigInt = boost::multiprecision::cpp_int;

struct Edge {
  int u = 0, v = 0;
  std::int64_t mult = 1;
};

/// Undirected multigraph stored as adjacency lists with multiplicities.
class FiniteMultigraph {
 public:
  FiniteMultigraph() = default;
  /// Parallel entries for the same pair are merged. Throws std::invalid_argument
  /// on loops, bad vertex ids, non-positive multiplicities, a disconnected graph
  /// or an isolated sink.
  FiniteMultigraph(int n_vertices, int sink, const std::vector<Edge>& edges, std::string name = {});

  int size() const { return n_; }
  int sink() const { return sink_; }
  const std::string& name() const { return name_; }
  std::int64_t degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }
  /// (neighbour, multiplicity) pairs, sorted by neighbour.
  const std::vector<std::pair<int, std::int64_t>>& adjacent(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  std::int64_t multiplicity(int u, int v) const;
  /// One entry per unordered pair with positive multiplicity, u < v.
  const std::vector<Edge>& edges() const { return edges_; }
  /// Total edge count, counting multiplicity.
  std::int64_t edge_count() const;

 private:
  int n_ = 0;
  int sink_ = 0;
  std::string name_;
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj_;
  std::vector<std::int64_t> degree_;
  std::vector<Edge> edges_;
};

/// Text format: '#' starts a comment; "vertices N" and "sink Z" header lines,
/// then one "u v [mult]" line per edge (vertices numbered 0..N-1, mult
/// defaults to 1).
FiniteMultigraph read_graph(std::istream& in, std::string name = {});
FiniteMultigraph read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const FiniteMultigraph& g);

/// Heights indexed by vertex id; the sink entry is always 0.
using SinkedConfig = std::vector<std::int64_t>;

struct SinkStabilization {
  SinkedConfig config;
  std::vector<std::int64_t> odometer;
};

bool is_stable(const FiniteMultigraph& g, const SinkedConfig& s);

/// Topples non-sink vertices with s(v) >= deg(v) until stable; grains sent to
/// the sink vanish. Throws std::invalid_argument for negative heights.
SinkStabilization stabilize_sink(const FiniteMultigraph& g, const SinkedConfig& s);

/// Adds one grain at v and stabilizes in place; returns the number of topplings.
std::int64_t add_grain(const FiniteMultigraph& g, SinkedConfig& s, int v);

/// Adds mult(z, v) grains at every v, stabilizes, and checks that every
/// non-sink vertex toppled exactly once and s came back. Throws
/// std::invalid_argument if s is not stable.
bool is_recurrent_burning(const FiniteMultigraph& g, const SinkedConfig& s);

/// stabilize(s + t); throws std::invalid_argument unless both are recurrent.
SinkedConfig group_add(const FiniteMultigraph& g, const SinkedConfig& s, const SinkedConfig& t);

/// e = stabilize(m - stabilize(m)), m = 2 (deg - 1); verified recurrent and
/// idempotent (VerificationError otherwise).
SinkedConfig identity_element(const FiniteMultigraph& g);

/// det of the reduced Laplacian by fraction-free (Bareiss) elimination.
BigInt group_order_matrix_tree(const FiniteMultigraph& g);

/// All recurrent configurations in lexicographic order; refuses graphs whose
/// number of stable configurations exceeds 10^7.
std::vector<SinkedConfig> enumerate_recurrents(const FiniteMultigraph& g);

/// Coefficients of x^i y^j.
class ExactPolynomial {
 public:
  BigInt coeff(int i, int j) const;
  void add(int i, int j, const BigInt& c);
  const std::map<std::pair<int, int>, BigInt>& terms() const { return terms_; }
  BigInt eval(std::int64_t x, std::int64_t y) const;
  /// d/dy at (x, y).
  BigInt dy(std::int64_t x, std::int64_t y) const;
  std::string to_string() const;
  friend bool operator==(const ExactPolynomial&, const ExactPolynomial&) = default;

 private:
  std::map<std::pair<int, int>, BigInt> terms_;
};

inline constexpr int kMaxBruteForceEdges = 24;

/// T(x, y) = sum over edge subsets A of (x-1)^(c(A)-1) (y-1)^(c(A)+#A-n),
/// parallel edges counted separately. Requires edge_count() <= 24.
ExactPolynomial tutte_brute(const FiniteMultigraph& g);

struct UnicycleCensus {
  BigInt count;
  /// cycle length -> number of spanning unicycles with that cycle
  std::map<int, BigInt> lengths;
  /// count / (n * T(1, 1))
  double tutte_slope = 0;
};

/// Spanning subgraphs with n edges that are connected. Requires edge_count() <= 24.
UnicycleCensus unicycle_census(const FiniteMultigraph& g);

/// Exact cross-checks: #recurrents (burning) = det(reduced Laplacian) = T(1, 1)
/// and dT/dy(1, 1) = number of spanning unicycles.
StatsReport algebra_exactness(const FiniteMultigraph& g);

/// Closure, associativity, commutativity, identity and inverses over all
/// recurrents (skipped with a note above `max_recurrents`), plus commutation
/// of the grain-addition operators on every stable configuration.
StatsReport check_group_laws(const FiniteMultigraph& g, std::size_t max_recurrents = 30);

/// n x n box of Z^2 with every lattice neighbour outside the box identified
/// to one sink vertex (id n^2); vertex (i, j) has id i * n + j.
FiniteMultigraph wired_grid(int n);

/// Small graphs used for exhaustive checks.
std::vector<FiniteMultigraph> graph_library();

}  // namespace lapgrowth
