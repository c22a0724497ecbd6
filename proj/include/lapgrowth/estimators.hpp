#pragma once

// Monte-Carlo estimates of the looping constant, sandpile height law, mean
// unicycle length and Tutte slope on wired boxes of Z^2.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lapgrowth/algebra.hpp"
#include "lapgrowth/lattice.hpp"
#include "lapgrowth/rng.hpp"
#include "lapgrowth/stats.hpp"

namespace lapgrowth {

inline constexpr double kXiTarget = 1.25;
inline constexpr double kZetaTarget = 17.0 / 8.0;
inline constexpr double kLambdaTarget = 8.0;
inline constexpr double kTauTarget = 1.0 / 8.0;

/// Height probabilities p_0..p_3 of the uniform recurrent sandpile on Z^2:
/// 2/pi^2 - 4/pi^3, 1/4 - 1/(2pi) - 3/pi^2 + 12/pi^3, 3/8 + 1/pi - 12/pi^3,
/// 3/8 - 1/(2pi) + 1/pi^2 + 4/pi^3.
std::array<double, 4> height_targets();

/// Loop erasure (chronological) of simple random walk from 0 stopped on
/// leaving [-R, R]^2. The last point lies outside the box. R >= 1.
std::vector<Point> lerw_sample(int R, RngStream& rng);

/// Number of the 4 neighbours of the origin on the path.
int origin_neighbors_on_path(const std::vector<Point>& path);

/// reps loop-erased walks, replica i driven by RngStream(seed).split(i).
EstimateResult looping_constant(int R, std::int64_t reps, std::uint64_t seed);

struct HeightEstimates {
  std::array<EstimateResult, 4> p;
  EstimateResult zeta;
  /// Standard error of zeta from 100 batch means (accounts for correlation).
  double zeta_batch_stderr = 0;
  std::int64_t first_recurrent = 0;  // additions until the burning test first passed
  std::int64_t additions = 0;
  std::int64_t recurrence_checks = 0;
};

/// n^2 log n, the default burn-in past first recurrence.
std::int64_t default_burnin(int n);

/// Add-a-grain-and-stabilize chain on wired_grid(n) with grains at uniform
/// non-sink vertices. After first recurrence (burning test every 16 additions)
/// and `burnin` more additions, records the height of vertex (n/2, n/2) every
/// `thin` additions. The burning test is re-asserted every 1000 additions
/// (VerificationError on failure); ConvergenceError if recurrence is not
/// reached within 100 n^2 additions.
HeightEstimates sandpile_mc_heights(int n, std::int64_t burnin, std::int64_t samples, int thin, std::uint64_t seed);

/// A multigraph with each parallel edge listed separately, plus half-edge
/// lists (neighbour, edge id) per vertex.
struct EdgeList {
  int vertices = 0;
  int root = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<std::pair<int, int>>> half;
};

/// root = sink of g.
EdgeList expand_edges(const FiniteMultigraph& g);

struct SpanningTree {
  std::vector<int> parent;       // -1 at the root
  std::vector<int> parent_edge;  // edge id towards the parent, -1 at the root
  std::vector<int> depth;
};

/// Uniform spanning tree by Wilson's algorithm rooted at g.root: loop-erased
/// walks from each vertex (in id order) until they hit the current tree.
SpanningTree wilson_ust(const EdgeList& g, RngStream& rng);

/// Spanning tree from the parent edges of a tree given as an edge-id list.
/// Throws std::invalid_argument if the ids do not form a spanning tree.
SpanningTree tree_from_edges(const EdgeList& g, const std::vector<int>& edge_ids);

/// Exact structural check: n - 1 edges, acyclic, every vertex reaches the root.
bool is_spanning_tree(const EdgeList& g, const SpanningTree& t);

/// Length of the cycle created by adding non-tree edge `edge` to t.
int unicycle_cycle_length(const EdgeList& g, const SpanningTree& t, int edge);

struct UnicycleEstimates {
  EstimateResult inverse_length;  // tilted mean of 1/l
  EstimateResult lambda;
  EstimateResult tau;
};

/// UST plus a uniform non-tree edge gives a unicycle with probability
/// proportional to its cycle length l, so lambda = 1 / E[1/l] and
/// tau = (m - n + 1) E[1/l] / n (delta-method standard errors).
/// Replica i uses RngStream(seed).split(i).
UnicycleEstimates unicycle_estimators(const FiniteMultigraph& g, std::int64_t reps, std::uint64_t seed);

/// Checks #trees (m - n + 1) E[1/l] = #unicycles: exactly, by summing 1/l over
/// every (tree, non-tree edge) pair, and statistically (|z| <= 3) from `reps`
/// tilted samples. Small graphs only (edge_count() <= 24).
StatsReport tilted_identity(const FiniteMultigraph& g, std::int64_t reps, std::uint64_t seed);

}  // namespace lapgrowth
