#include "lapgrowth/algebra.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lapgrowth/errors.hpp"

namespace lapgrowth {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

std::string to_str(const BigInt& b) { return b.str(); }

double to_double(const BigInt& b) { return b.convert_to<double>(); }

}  // namespace

FiniteMultigraph::FiniteMultigraph(int n_vertices, int sink, const std::vector<Edge>& edges, std::string name)
    : n_(n_vertices), sink_(sink), name_(std::move(name)) {
  if (n_ < 2) throw std::invalid_argument("graph needs at least two vertices");
  if (sink_ < 0 || sink_ >= n_) throw std::invalid_argument("sink id out of range");
  std::map<std::pair<int, int>, std::int64_t> merged;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw std::invalid_argument("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + ": vertex out of range");
    if (e.u == e.v) throw std::invalid_argument("loop at vertex " + std::to_string(e.u));
    if (e.mult <= 0) throw std::invalid_argument("non-positive multiplicity");
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.mult;
  }
  adj_.assign(uz(n_), {});
  degree_.assign(uz(n_), 0);
  for (const auto& [key, m] : merged) {
    edges_.push_back({key.first, key.second, m});
    adj_[uz(key.first)].emplace_back(key.second, m);
    adj_[uz(key.second)].emplace_back(key.first, m);
    degree_[uz(key.first)] += m;
    degree_[uz(key.second)] += m;
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  if (degree_[uz(sink_)] == 0) throw std::invalid_argument("sink is isolated");

  std::vector<char> seen(uz(n_), 0);
  std::vector<int> stack{sink_};
  seen[uz(sink_)] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [w, m] : adj_[uz(v)]) {
      if (!seen[uz(w)]) {
        seen[uz(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != n_) throw std::invalid_argument("graph is not connected");
}

std::int64_t FiniteMultigraph::multiplicity(int u, int v) const {
  const auto& a = adj_.at(uz(u));
  const auto it = std::lower_bound(a.begin(), a.end(), std::pair<int, std::int64_t>{v, 0});
  return it != a.end() && it->first == v ? it->second : 0;
}

std::int64_t FiniteMultigraph::edge_count() const {
  std::int64_t m = 0;
  for (const Edge& e : edges_) m += e.mult;
  return m;
}

FiniteMultigraph read_graph(std::istream& in, std::string name) {
  int n = -1, sink = -1;
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto bad = [&] { return std::invalid_argument("graph line " + std::to_string(lineno) + ": cannot parse"); };
    if (head == "vertices") {
      if (!(ls >> n)) throw bad();
    } else if (head == "sink") {
      if (!(ls >> sink)) throw bad();
    } else {
      Edge e;
      std::istringstream es(line);
      if (!(es >> e.u >> e.v)) throw bad();
      std::string rest;
      if (es >> rest) {
        std::size_t used = 0;
        try {
          e.mult = std::stoll(rest, &used);
        } catch (const std::exception&) {
          throw bad();
        }
        if (used != rest.size() || es >> rest) throw bad();
      }
      edges.push_back(e);
    }
  }
  if (n < 0) throw std::invalid_argument("graph: missing 'vertices' line");
  if (sink < 0) throw std::invalid_argument("graph: missing 'sink' line");
  return FiniteMultigraph(n, sink, edges, std::move(name));
}

FiniteMultigraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_graph(in, path.stem().string());
}

void write_graph(std::ostream& out, const FiniteMultigraph& g) {
  if (!g.name().empty()) out << "# " << g.name() << '\n';
  out << "vertices " << g.size() << '\n' << "sink " << g.sink() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.mult << '\n';
}

bool is_stable(const FiniteMultigraph& g, const SinkedConfig& s) {
  for (int v = 0; v < g.size(); ++v)
    if (v != g.sink() && s[uz(v)] >= g.degree(v)) return false;
  return true;
}

namespace {

void check_config(const FiniteMultigraph& g, const SinkedConfig& s) {
  if (s.size() != uz(g.size())) throw std::invalid_argument("config size does not match graph");
  for (int v = 0; v < g.size(); ++v)
    if (v != g.sink() && s[uz(v)] < 0) throw std::invalid_argument("negative height");
}

// Batch toppling from a work queue; returns total topplings.
std::int64_t relax(const FiniteMultigraph& g, SinkedConfig& s, std::vector<std::int64_t>* odo,
                   std::deque<int> queue) {
  const int z = g.sink();
  std::vector<char> queued(uz(g.size()), 0);
  for (int v : queue) queued[uz(v)] = 1;
  std::int64_t total = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    queued[uz(v)] = 0;
    const std::int64_t deg = g.degree(v);
    if (s[uz(v)] < deg) continue;
    const std::int64_t k = s[uz(v)] / deg;
    s[uz(v)] -= k * deg;
    total += k;
    if (odo) (*odo)[uz(v)] += k;
    for (const auto& [w, m] : g.adjacent(v)) {
      if (w == z) continue;
      s[uz(w)] += k * m;
      if (!queued[uz(w)] && s[uz(w)] >= g.degree(w)) {
        queued[uz(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  s[uz(z)] = 0;
  return total;
}

std::deque<int> unstable_sites(const FiniteMultigraph& g, const SinkedConfig& s) {
  std::deque<int> q;
  for (int v = 0; v < g.size(); ++v)
    if (v != g.sink() && s[uz(v)] >= g.degree(v)) q.push_back(v);
  return q;
}

}  // namespace

SinkStabilization stabilize_sink(const FiniteMultigraph& g, const SinkedConfig& s) {
  check_config(g, s);
  SinkStabilization out{s, std::vector<std::int64_t>(uz(g.size()), 0)};
  out.config[uz(g.sink())] = 0;
  relax(g, out.config, &out.odometer, unstable_sites(g, out.config));
  return out;
}

std::int64_t add_grain(const FiniteMultigraph& g, SinkedConfig& s, int v) {
  if (v < 0 || v >= g.size()) throw std::invalid_argument("add_grain: vertex out of range");
  if (v == g.sink()) return 0;
  ++s[uz(v)];
  if (s[uz(v)] < g.degree(v)) return 0;
  return relax(g, s, nullptr, {v});
}

bool is_recurrent_burning(const FiniteMultigraph& g, const SinkedConfig& s) {
  check_config(g, s);
  if (!is_stable(g, s)) throw std::invalid_argument("is_recurrent_burning: configuration is not stable");
  SinkedConfig t = s;
  for (const auto& [w, m] : g.adjacent(g.sink())) t[uz(w)] += m;
  const SinkStabilization r = stabilize_sink(g, t);
  for (int v = 0; v < g.size(); ++v) {
    if (v == g.sink()) continue;
    if (r.odometer[uz(v)] != 1 || r.config[uz(v)] != s[uz(v)]) return false;
  }
  return true;
}

SinkedConfig group_add(const FiniteMultigraph& g, const SinkedConfig& s, const SinkedConfig& t) {
  if (!is_recurrent_burning(g, s) || !is_recurrent_burning(g, t))
    throw std::invalid_argument("group_add: operands must be recurrent");
  SinkedConfig sum(uz(g.size()), 0);
  for (int v = 0; v < g.size(); ++v) sum[uz(v)] = s[uz(v)] + t[uz(v)];
  return stabilize_sink(g, sum).config;
}

SinkedConfig identity_element(const FiniteMultigraph& g) {
  SinkedConfig m(uz(g.size()), 0);
  for (int v = 0; v < g.size(); ++v)
    if (v != g.sink()) m[uz(v)] = 2 * (g.degree(v) - 1);
  const SinkedConfig ms = stabilize_sink(g, m).config;
  SinkedConfig diff(uz(g.size()), 0);
  for (int v = 0; v < g.size(); ++v) diff[uz(v)] = m[uz(v)] - ms[uz(v)];
  SinkedConfig e = stabilize_sink(g, diff).config;
  if (!is_recurrent_burning(g, e)) throw VerificationError("identity candidate is not recurrent");
  if (group_add(g, e, e) != e) throw VerificationError("identity candidate is not idempotent");
  return e;
}

BigInt group_order_matrix_tree(const FiniteMultigraph& g) {
  std::vector<int> idx;
  for (int v = 0; v < g.size(); ++v)
    if (v != g.sink()) idx.push_back(v);
  const std::size_t k = idx.size();
  std::vector<int> pos(uz(g.size()), -1);
  for (std::size_t i = 0; i < k; ++i) pos[uz(idx[i])] = static_cast<int>(i);
  std::vector<std::vector<BigInt>> a(k, std::vector<BigInt>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    a[i][i] = g.degree(idx[i]);
    for (const auto& [w, m] : g.adjacent(idx[i]))
      if (pos[uz(w)] >= 0) a[i][uz(pos[uz(w)])] -= m;
  }
  // Bareiss: after step p every entry below row p is a (p+1)-minor.
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t p = 0; p < k; ++p) {
    if (a[p][p] == 0) {
      std::size_t r = p + 1;
      while (r < k && a[r][p] == 0) ++r;
      if (r == k) return 0;
      std::swap(a[p], a[r]);
      sign = -sign;
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      for (std::size_t j = p + 1; j < k; ++j) a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
      a[i][p] = 0;
    }
    prev = a[p][p];
  }
  return k == 0 ? BigInt(1) : sign * a[k - 1][k - 1];
}

std::vector<SinkedConfig> enumerate_recurrents(const FiniteMultigraph& g) {
  double total = 1;
  std::vector<int> vs;
  for (int v = 0; v < g.size(); ++v) {
    if (v == g.sink()) continue;
    vs.push_back(v);
    total *= static_cast<double>(g.degree(v));
  }
  if (total > 1e7)
    throw std::invalid_argument("enumerate_recurrents: " + std::to_string(static_cast<long long>(total)) +
                                " stable configurations exceeds 10^7");
  std::vector<SinkedConfig> out;
  SinkedConfig s(uz(g.size()), 0);
  // Odometer over heights, last vertex fastest, giving lexicographic order.
  for (;;) {
    if (is_recurrent_burning(g, s)) out.push_back(s);
    std::size_t i = vs.size();
    while (i > 0) {
      const int v = vs[i - 1];
      if (++s[uz(v)] < g.degree(v)) break;
      s[uz(v)] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

BigInt ExactPolynomial::coeff(int i, int j) const {
  const auto it = terms_.find({i, j});
  return it == terms_.end() ? BigInt(0) : it->second;
}

void ExactPolynomial::add(int i, int j, const BigInt& c) {
  if (c == 0) return;
  BigInt& t = terms_[{i, j}];
  t += c;
  if (t == 0) terms_.erase({i, j});
}

BigInt ExactPolynomial::eval(std::int64_t x, std::int64_t y) const {
  BigInt sum = 0;
  for (const auto& [ij, c] : terms_) sum += c * pow(BigInt(x), static_cast<unsigned>(ij.first)) *
                                          pow(BigInt(y), static_cast<unsigned>(ij.second));
  return sum;
}

BigInt ExactPolynomial::dy(std::int64_t x, std::int64_t y) const {
  BigInt sum = 0;
  for (const auto& [ij, c] : terms_) {
    if (ij.second == 0) continue;
    sum += c * ij.second * pow(BigInt(x), static_cast<unsigned>(ij.first)) *
           pow(BigInt(y), static_cast<unsigned>(ij.second - 1));
  }
  return sum;
}

std::string ExactPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest total degree first, then by x power.
  std::vector<std::pair<std::pair<int, int>, BigInt>> ts(terms_.begin(), terms_.end());
  std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
    const int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
    return da != db ? da > db : a.first.first > b.first.first;
  });
  for (const auto& [ij, c] : ts) {
    const auto [i, j] = ij;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    std::string mono;
    if (i > 0) mono += i == 1 ? "x" : "x^" + std::to_string(i);
    if (j > 0) mono += j == 1 ? "y" : "y^" + std::to_string(j);
    if (mono.empty()) out += to_str(mag);
    else out += (mag == 1 ? std::string() : to_str(mag)) + mono;
  }
  return out;
}

namespace {

// Union-find with undo: union by size, no path compression.
class RollbackDsu {
 public:
  explicit RollbackDsu(int n) : parent_(uz(n)), size_(uz(n), 1), comps_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int v) const {
    while (parent_[uz(v)] != v) v = parent_[uz(v)];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) {
      history_.push_back(-1);
      return false;
    }
    if (size_[uz(a)] < size_[uz(b)]) std::swap(a, b);
    parent_[uz(b)] = a;
    size_[uz(a)] += size_[uz(b)];
    --comps_;
    history_.push_back(b);
    return true;
  }
  void undo() {
    const int b = history_.back();
    history_.pop_back();
    if (b < 0) return;
    const int a = parent_[uz(b)];
    size_[uz(a)] -= size_[uz(b)];
    parent_[uz(b)] = b;
    ++comps_;
  }
  int components() const { return comps_; }

 private:
  std::vector<int> parent_, size_;
  std::vector<int> history_;
  int comps_;
};

std::vector<std::pair<int, int>> simple_edge_list(const FiniteMultigraph& g, const char* who) {
  if (g.edge_count() > kMaxBruteForceEdges)
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(g.edge_count()) + " edges exceeds " +
                                std::to_string(kMaxBruteForceEdges));
  std::vector<std::pair<int, int>> list;
  for (const Edge& e : g.edges())
    for (std::int64_t k = 0; k < e.mult; ++k) list.emplace_back(e.u, e.v);
  return list;
}

BigInt binomial(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ExactPolynomial tutte_brute(const FiniteMultigraph& g) {
  const auto list = simple_edge_list(g, "tutte_brute");
  const int n = g.size(), m = static_cast<int>(list.size());
  // rank-nullity counts: cnt[c - 1][#A - n + c]
  std::vector<std::vector<std::uint64_t>> cnt(uz(n), std::vector<std::uint64_t>(uz(m + 1), 0));
  RollbackDsu dsu(n);
  auto rec = [&](auto&& self, int i, int size) -> void {
    if (i == m) {
      const int c = dsu.components();
      ++cnt[uz(c - 1)][uz(size - n + c)];
      return;
    }
    self(self, i + 1, size);
    dsu.unite(list[uz(i)].first, list[uz(i)].second);
    self(self, i + 1, size + 1);
    dsu.undo();
  };
  rec(rec, 0, 0);

  // (x-1)^a (y-1)^b expanded binomially.
  ExactPolynomial t;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b <= m; ++b) {
      if (cnt[uz(a)][uz(b)] == 0) continue;
      const BigInt c = cnt[uz(a)][uz(b)];
      for (int i = 0; i <= a; ++i) {
        const BigInt ca = binomial(a, i) * ((a - i) % 2 ? -1 : 1);
        for (int j = 0; j <= b; ++j) t.add(i, j, c * ca * binomial(b, j) * ((b - j) % 2 ? -1 : 1));
      }
    }
  }
  return t;
}

UnicycleCensus unicycle_census(const FiniteMultigraph& g) {
  const auto list = simple_edge_list(g, "unicycle_census");
  const int n = g.size(), m = static_cast<int>(list.size());
  std::map<int, std::uint64_t> lengths;
  std::vector<int> chosen;
  std::vector<int> deg(uz(n));
  std::vector<char> alive(uz(n));
  std::vector<int> stack;
  RollbackDsu dsu(n);

  auto cycle_length = [&] {
    std::fill(deg.begin(), deg.end(), 0);
    std::fill(alive.begin(), alive.end(), 1);
    for (int e : chosen) {
      ++deg[uz(list[uz(e)].first)];
      ++deg[uz(list[uz(e)].second)];
    }
    stack.clear();
    for (int v = 0; v < n; ++v)
      if (deg[uz(v)] == 1) stack.push_back(v);
    int remaining = n;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      alive[uz(v)] = 0;
      --remaining;
      for (int e : chosen) {
        const auto [a, b] = list[uz(e)];
        const int w = a == v ? b : b == v ? a : -1;
        if (w < 0 || !alive[uz(w)]) continue;
        if (--deg[uz(w)] == 1) stack.push_back(w);
      }
    }
    return remaining;
  };

  auto rec = [&](auto&& self, int i) -> void {
    const int size = static_cast<int>(chosen.size());
    if (size == n) {
      if (dsu.components() == 1) ++lengths[cycle_length()];
      return;
    }
    if (m - i < n - size) return;
    chosen.push_back(i);
    dsu.unite(list[uz(i)].first, list[uz(i)].second);
    // A subset with n edges and one component contains exactly one cycle, so
    // a second cycle-closing edge rules the branch out.
    const int merges = n - dsu.components();
    if (static_cast<int>(chosen.size()) - merges <= 1) self(self, i + 1);
    dsu.undo();
    chosen.pop_back();
    self(self, i + 1);
  };
  rec(rec, 0);

  UnicycleCensus out;
  for (const auto& [len, c] : lengths) {
    out.lengths[len] = c;
    out.count += c;
  }
  const BigInt trees = group_order_matrix_tree(g);
  out.tutte_slope = to_double(out.count) / (static_cast<double>(n) * to_double(trees));
  return out;
}

StatsReport algebra_exactness(const FiniteMultigraph& g) {
  StatsReport rep("algebra exactness: " + g.name());
  const BigInt det = group_order_matrix_tree(g);
  const auto recs = enumerate_recurrents(g);
  const ExactPolynomial t = tutte_brute(g);
  const BigInt t11 = t.eval(1, 1), dy11 = t.dy(1, 1);
  const UnicycleCensus census = unicycle_census(g);
  rep.add("vertices", g.size());
  rep.add("edges", static_cast<double>(g.edge_count()));
  rep.add("recurrents", static_cast<double>(recs.size()));
  rep.add("det_reduced_laplacian", to_double(det));
  rep.add("tutte_11", to_double(t11));
  rep.add("tutte_dy_11", to_double(dy11));
  rep.add("unicycles", to_double(census.count));
  rep.add("tutte_slope", census.tutte_slope);
  rep.note("T = " + t.to_string());
  if (BigInt(recs.size()) != det)
    rep.fail("#recurrents " + std::to_string(recs.size()) + " != det " + to_str(det));
  if (t11 != det) rep.fail("T(1,1) " + to_str(t11) + " != det " + to_str(det));
  if (dy11 != census.count) rep.fail("dT/dy(1,1) " + to_str(dy11) + " != unicycles " + to_str(census.count));
  for (const auto& [ij, c] : t.terms())
    if (c < 0) rep.fail("negative Tutte coefficient at x^" + std::to_string(ij.first) + " y^" + std::to_string(ij.second));
  return rep;
}

StatsReport check_group_laws(const FiniteMultigraph& g, std::size_t max_recurrents) {
  StatsReport rep("group laws: " + g.name());
  const auto recs = enumerate_recurrents(g);
  const std::size_t k = recs.size();
  rep.add("recurrents", static_cast<double>(k));
  const SinkedConfig e = identity_element(g);

  if (k <= max_recurrents) {
    std::map<SinkedConfig, std::size_t> index;
    for (std::size_t i = 0; i < k; ++i) index[recs[i]] = i;
    std::vector<std::vector<std::size_t>> table(k, std::vector<std::size_t>(k));
    std::int64_t failures = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const auto it = index.find(group_add(g, recs[i], recs[j]));
        if (it == index.end()) {
          rep.fail("closure: sum is not an enumerated recurrent");
          return rep;
        }
        table[i][j] = it->second;
      }
    }
    const std::size_t ie = index.at(e);
    for (std::size_t i = 0; i < k; ++i) {
      bool has_inverse = false;
      if (table[ie][i] != i) ++failures, rep.fail("identity law");
      for (std::size_t j = 0; j < k; ++j) {
        if (table[i][j] != table[j][i]) ++failures, rep.fail("commutativity");
        if (table[i][j] == ie) has_inverse = true;
        for (std::size_t l = 0; l < k; ++l)
          if (table[table[i][j]][l] != table[i][table[j][l]]) ++failures, rep.fail("associativity");
      }
      if (!has_inverse) ++failures, rep.fail("missing inverse");
    }
    rep.add("law_violations", static_cast<double>(failures));
    rep.add("triples_checked", static_cast<double>(k * k * k));
  } else {
    rep.note("group table skipped: " + std::to_string(k) + " recurrents > " + std::to_string(max_recurrents));
  }

  // a_x a_y = a_y a_x on every stable configuration.
  std::vector<int> vs;
  double stable_count = 1;
  for (int v = 0; v < g.size(); ++v) {
    if (v == g.sink()) continue;
    vs.push_back(v);
    stable_count *= static_cast<double>(g.degree(v));
  }
  if (stable_count * static_cast<double>(vs.size() * vs.size()) > 2e7) {
    rep.note("grain-operator commutation skipped: too many stable configurations");
    return rep;
  }
  std::int64_t pairs = 0, bad = 0;
  SinkedConfig s(uz(g.size()), 0);
  for (;;) {
    for (std::size_t a = 0; a < vs.size(); ++a) {
      for (std::size_t b = a + 1; b < vs.size(); ++b) {
        SinkedConfig s1 = s, s2 = s;
        add_grain(g, s1, vs[a]);
        add_grain(g, s1, vs[b]);
        add_grain(g, s2, vs[b]);
        add_grain(g, s2, vs[a]);
        ++pairs;
        if (s1 != s2) ++bad;
      }
    }
    std::size_t i = vs.size();
    while (i > 0) {
      const int v = vs[i - 1];
      if (++s[uz(v)] < g.degree(v)) break;
      s[uz(v)] = 0;
      --i;
    }
    if (i == 0) break;
  }
  rep.add("operator_pairs", static_cast<double>(pairs));
  rep.add("operator_noncommuting", static_cast<double>(bad));
  if (bad) rep.fail("grain operators do not commute");
  return rep;
}

FiniteMultigraph wired_grid(int n) {
  if (n < 1) throw std::invalid_argument("wired_grid: n must be >= 1");
  const int z = n * n;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = i * n + j;
      if (i + 1 < n) edges.push_back({v, v + n, 1});
      if (j + 1 < n) edges.push_back({v, v + 1, 1});
      const int cut = (i == 0) + (i == n - 1) + (j == 0) + (j == n - 1);
      if (cut) edges.push_back({v, z, cut});
    }
  }
  return FiniteMultigraph(z + 1, z, edges, "wired_grid_" + std::to_string(n));
}

std::vector<FiniteMultigraph> graph_library() {
  auto cycle = [](int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1});
    return FiniteMultigraph(n, 0, e, "cycle_" + std::to_string(n));
  };
  auto complete = [](int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1});
    return FiniteMultigraph(n, 0, e, "complete_" + std::to_string(n));
  };
  std::vector<FiniteMultigraph> lib;
  lib.emplace_back(2, 0, std::vector<Edge>{{0, 1, 1}}, "single_edge");
  lib.emplace_back(2, 0, std::vector<Edge>{{0, 1, 2}}, "double_edge");
  lib.emplace_back(4, 0, std::vector<Edge>{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, "path_4");
  lib.push_back(cycle(3));
  lib.push_back(cycle(4));
  lib.push_back(cycle(5));
  lib.push_back(complete(4));
  lib.push_back(complete(5));
  lib.emplace_back(3, 0, std::vector<Edge>{{0, 1, 2}, {1, 2, 1}, {0, 2, 1}}, "triangle_doubled_edge");
  lib.emplace_back(4, 0, std::vector<Edge>{{0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, 1}, {0, 3, 2}}, "theta_multi");
  lib.push_back(wired_grid(2));
  lib.push_back(wired_grid(3));
  return lib;
}

}  // namespace lapgrowth
