#include "lapgrowth/estimators.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lapgrowth/errors.hpp"

namespace lapgrowth {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

// Loop-erased walk on a padded box; idx[k] is the position of site k on the
// current path or -1.
class LerwBox {
 public:
  explicit LerwBox(int R) : R_(R), side_(2 * R + 3) {
    if (R < 1) throw std::invalid_argument("lerw: R must be >= 1");
    idx_.assign(uz(side_ * side_), -1);
    inside_.assign(uz(side_ * side_), 0);
    for (int i = 1; i < side_ - 1; ++i)
      for (int j = 1; j < side_ - 1; ++j) inside_[uz(i * side_ + j)] = 1;
    offs_ = {side_, -side_, 1, -1};  // E, W, N, S with x along rows
    origin_ = (R_ + 1) * side_ + (R_ + 1);
  }

  void run(RngStream& rng) {
    for (int k : path_) idx_[uz(k)] = -1;
    path_.clear();
    int k = origin_;
    push(k);
    while (inside_[uz(k)]) {
      k += offs_[rng.direction(4)];
      if (const int at = idx_[uz(k)]; at >= 0) {
        while (static_cast<int>(path_.size()) > at + 1) {
          idx_[uz(path_.back())] = -1;
          path_.pop_back();
        }
      } else {
        push(k);
      }
    }
  }

  int origin_neighbors() const {
    int c = 0;
    for (int o : offs_) c += idx_[uz(origin_ + o)] >= 0;
    return c;
  }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(path_.size());
    for (int k : path_) out.push_back(Point{k / side_ - (R_ + 1), k % side_ - (R_ + 1)});
    return out;
  }

 private:
  void push(int k) {
    idx_[uz(k)] = static_cast<int>(path_.size());
    path_.push_back(k);
  }

  int R_, side_, origin_;
  std::array<int, 4> offs_{};
  std::vector<int> idx_;
  std::vector<std::uint8_t> inside_;
  std::vector<int> path_;
};

}  // namespace

std::array<double, 4> height_targets() {
  const double pi = std::numbers::pi, pi2 = pi * pi, pi3 = pi2 * pi;
  return {2 / pi2 - 4 / pi3, 0.25 - 1 / (2 * pi) - 3 / pi2 + 12 / pi3, 0.375 + 1 / pi - 12 / pi3,
          0.375 - 1 / (2 * pi) + 1 / pi2 + 4 / pi3};
}

std::vector<Point> lerw_sample(int R, RngStream& rng) {
  LerwBox box(R);
  box.run(rng);
  return box.points();
}

int origin_neighbors_on_path(const std::vector<Point>& path) {
  int c = 0;
  for (const Point& p : path) c += p.norm2() == 1;
  return c;
}

EstimateResult looping_constant(int R, std::int64_t reps, std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("looping_constant: reps must be >= 2");
  LerwBox box(R);
  const RngStream base(seed);
  std::vector<double> counts(static_cast<std::size_t>(reps));
  for (std::int64_t i = 0; i < reps; ++i) {
    RngStream rng = base.split(static_cast<std::uint64_t>(i));
    box.run(rng);
    counts[static_cast<std::size_t>(i)] = box.origin_neighbors();
  }
  return mean_estimate("xi", counts, kXiTarget);
}

std::int64_t default_burnin(int n) {
  return static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * n * std::log(static_cast<double>(n))));
}

HeightEstimates sandpile_mc_heights(int n, std::int64_t burnin, std::int64_t samples, int thin, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sandpile_mc_heights: n must be >= 2");
  if (samples < 100 || thin < 1 || burnin < 0) throw std::invalid_argument("sandpile_mc_heights: bad chain lengths");
  const FiniteMultigraph g = wired_grid(n);
  const int nn = n * n;
  SinkedConfig s(uz(nn + 1), 0);
  std::vector<int> stack;
  RngStream rng(seed);

  // Grid toppling with the sink outside the box; s uses the wired_grid ids.
  auto add = [&](int v) {
    if (++s[uz(v)] < 4) return;
    stack.push_back(v);
    while (!stack.empty()) {
      const int w = stack.back();
      stack.pop_back();
      const std::int64_t k = s[uz(w)] / 4;
      s[uz(w)] -= 4 * k;
      const int i = w / n, j = w % n;
      auto give = [&](int u) {
        const std::int64_t before = s[uz(u)];
        s[uz(u)] += k;
        if (before < 4 && s[uz(u)] >= 4) stack.push_back(u);
      };
      if (i > 0) give(w - n);
      if (i + 1 < n) give(w + n);
      if (j > 0) give(w - 1);
      if (j + 1 < n) give(w + 1);
    }
  };

  HeightEstimates out;
  const std::int64_t cap = 100LL * nn;
  std::int64_t t = 0;
  for (;;) {
    add(static_cast<int>(rng.below(static_cast<std::uint64_t>(nn))));
    ++t;
    if (t % 16 == 0) {
      ++out.recurrence_checks;
      if (is_recurrent_burning(g, s)) break;
    }
    if (t > cap) throw ConvergenceError("sandpile chain not recurrent after " + std::to_string(cap) + " additions");
  }
  out.first_recurrent = t;

  const int center = (n / 2) * n + n / 2;
  std::array<std::vector<double>, 4> ind;
  for (auto& v : ind) v.resize(static_cast<std::size_t>(samples));
  std::vector<double> heights(static_cast<std::size_t>(samples));
  const std::int64_t total = burnin + samples * thin;
  for (std::int64_t step = 1; step <= total; ++step) {
    add(static_cast<int>(rng.below(static_cast<std::uint64_t>(nn))));
    if (step % 1000 == 0) {
      ++out.recurrence_checks;
      if (!is_recurrent_burning(g, s))
        throw VerificationError("sandpile chain left the recurrent class at step " + std::to_string(t + step));
    }
    if (step > burnin && (step - burnin) % thin == 0) {
      const auto k = static_cast<std::size_t>((step - burnin) / thin - 1);
      const std::int64_t h = s[uz(center)];
      for (int i = 0; i < 4; ++i) ind[uz(i)][k] = h == i ? 1.0 : 0.0;
      heights[k] = static_cast<double>(h);
    }
  }
  out.additions = t + total;

  const auto targets = height_targets();
  for (int i = 0; i < 4; ++i) out.p[uz(i)] = mean_estimate("p" + std::to_string(i), ind[uz(i)], targets[uz(i)]);
  out.zeta = mean_estimate("zeta", heights, kZetaTarget);

  constexpr int kBatches = 100;
  const std::size_t per = heights.size() / kBatches;
  std::vector<double> means(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    double sum = 0;
    for (std::size_t k = 0; k < per; ++k) sum += heights[uz(b) * per + k];
    means[uz(b)] = sum / static_cast<double>(per);
  }
  out.zeta_batch_stderr = mean_estimate("batch", means).stderr_;
  return out;
}

EdgeList expand_edges(const FiniteMultigraph& g) {
  EdgeList out;
  out.vertices = g.size();
  out.root = g.sink();
  out.half.assign(uz(g.size()), {});
  for (const Edge& e : g.edges()) {
    for (std::int64_t k = 0; k < e.mult; ++k) {
      const int id = static_cast<int>(out.edges.size());
      out.edges.emplace_back(e.u, e.v);
      out.half[uz(e.u)].emplace_back(e.v, id);
      out.half[uz(e.v)].emplace_back(e.u, id);
    }
  }
  return out;
}

namespace {

void fill_depths(SpanningTree& t) {
  const std::size_t n = t.parent.size();
  t.depth.assign(n, -1);
  std::vector<int> chain;
  for (std::size_t v = 0; v < n; ++v) {
    int u = static_cast<int>(v);
    chain.clear();
    while (t.depth[uz(u)] < 0 && t.parent[uz(u)] >= 0) {
      chain.push_back(u);
      u = t.parent[uz(u)];
    }
    if (t.depth[uz(u)] < 0) t.depth[uz(u)] = 0;
    int d = t.depth[uz(u)];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) t.depth[uz(*it)] = ++d;
  }
}

}  // namespace

SpanningTree wilson_ust(const EdgeList& g, RngStream& rng) {
  const int n = g.vertices;
  SpanningTree t;
  t.parent.assign(uz(n), -1);
  t.parent_edge.assign(uz(n), -1);
  std::vector<char> in_tree(uz(n), 0);
  std::vector<int> next(uz(n), -1);  // half-edge index last taken
  in_tree[uz(g.root)] = 1;
  for (int i = 0; i < n; ++i) {
    int u = i;
    while (!in_tree[uz(u)]) {
      const auto& hs = g.half[uz(u)];
      const auto h = static_cast<int>(rng.below(hs.size()));
      next[uz(u)] = h;
      u = hs[uz(h)].first;
    }
    u = i;
    while (!in_tree[uz(u)]) {
      in_tree[uz(u)] = 1;
      const auto& [w, e] = g.half[uz(u)][uz(next[uz(u)])];
      t.parent[uz(u)] = w;
      t.parent_edge[uz(u)] = e;
      u = w;
    }
  }
  fill_depths(t);
  return t;
}

SpanningTree tree_from_edges(const EdgeList& g, const std::vector<int>& edge_ids) {
  const int n = g.vertices;
  if (static_cast<int>(edge_ids.size()) != n - 1) throw std::invalid_argument("tree_from_edges: need n - 1 edges");
  std::vector<std::vector<std::pair<int, int>>> adj(uz(n));
  for (int e : edge_ids) {
    const auto [a, b] = g.edges.at(uz(e));
    adj[uz(a)].emplace_back(b, e);
    adj[uz(b)].emplace_back(a, e);
  }
  SpanningTree t;
  t.parent.assign(uz(n), -1);
  t.parent_edge.assign(uz(n), -1);
  std::vector<char> seen(uz(n), 0);
  std::vector<int> stack{g.root};
  seen[uz(g.root)] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [w, e] : adj[uz(v)]) {
      if (seen[uz(w)]) continue;
      seen[uz(w)] = 1;
      ++reached;
      t.parent[uz(w)] = v;
      t.parent_edge[uz(w)] = e;
      stack.push_back(w);
    }
  }
  if (reached != n) throw std::invalid_argument("tree_from_edges: edges do not span");
  fill_depths(t);
  return t;
}

bool is_spanning_tree(const EdgeList& g, const SpanningTree& t) {
  const int n = g.vertices;
  if (static_cast<int>(t.parent.size()) != n || t.parent[uz(g.root)] != -1) return false;
  std::vector<char> used(g.edges.size(), 0);
  for (int v = 0; v < n; ++v) {
    if (v == g.root) continue;
    const int p = t.parent[uz(v)], e = t.parent_edge[uz(v)];
    if (p < 0 || e < 0 || uz(e) >= g.edges.size() || used[uz(e)]) return false;
    const auto [a, b] = g.edges[uz(e)];
    if (!((a == v && b == p) || (a == p && b == v))) return false;
    used[uz(e)] = 1;
  }
  // Every vertex reaches the root in fewer than n parent steps: no cycles.
  for (int v = 0; v < n; ++v) {
    int u = v, steps = 0;
    while (u != g.root && steps < n) {
      u = t.parent[uz(u)];
      ++steps;
    }
    if (u != g.root) return false;
  }
  return true;
}

int unicycle_cycle_length(const EdgeList& g, const SpanningTree& t, int edge) {
  auto [a, b] = g.edges.at(uz(edge));
  int len = 1;
  while (t.depth[uz(a)] > t.depth[uz(b)]) a = t.parent[uz(a)], ++len;
  while (t.depth[uz(b)] > t.depth[uz(a)]) b = t.parent[uz(b)], ++len;
  while (a != b) {
    a = t.parent[uz(a)];
    b = t.parent[uz(b)];
    len += 2;
  }
  return len;
}

namespace {

int random_non_tree_edge(const EdgeList& g, const SpanningTree& t, std::vector<char>& in_tree, RngStream& rng) {
  std::fill(in_tree.begin(), in_tree.end(), 0);
  for (int e : t.parent_edge)
    if (e >= 0) in_tree[uz(e)] = 1;
  for (;;) {
    const auto e = static_cast<int>(rng.below(g.edges.size()));
    if (!in_tree[uz(e)]) return e;
  }
}

}  // namespace

UnicycleEstimates unicycle_estimators(const FiniteMultigraph& g, std::int64_t reps, std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("unicycle_estimators: reps must be >= 2");
  const EdgeList el = expand_edges(g);
  const auto m = static_cast<double>(el.edges.size()), n = static_cast<double>(el.vertices);
  if (m - n + 1 < 1) throw std::invalid_argument("unicycle_estimators: graph is a tree");
  const RngStream base(seed);
  std::vector<char> in_tree(el.edges.size());
  std::vector<double> inv(static_cast<std::size_t>(reps));
  for (std::int64_t i = 0; i < reps; ++i) {
    RngStream rng = base.split(static_cast<std::uint64_t>(i));
    const SpanningTree t = wilson_ust(el, rng);
    const int e = random_non_tree_edge(el, t, in_tree, rng);
    inv[static_cast<std::size_t>(i)] = 1.0 / unicycle_cycle_length(el, t, e);
  }
  UnicycleEstimates out;
  out.inverse_length = mean_estimate("inverse_length", inv);
  const double mu = out.inverse_length.value, se = out.inverse_length.stderr_;
  out.lambda = {"lambda", 1 / mu, se / (mu * mu), reps, kLambdaTarget};
  const double scale = (m - n + 1) / n;
  out.tau = {"tau", scale * mu, scale * se, reps, kTauTarget};
  return out;
}

StatsReport tilted_identity(const FiniteMultigraph& g, std::int64_t reps, std::uint64_t seed) {
  const EdgeList el = expand_edges(g);
  const int n = el.vertices, m = static_cast<int>(el.edges.size());
  if (m > kMaxBruteForceEdges) throw std::invalid_argument("tilted_identity: graph too large");
  StatsReport rep("tilted sampler identity: " + g.name());

  // Exact: sum of 1/l over (tree, non-tree edge) pairs.
  using Q = boost::rational<BigInt>;
  Q exact_sum(0);
  std::int64_t trees = 0;
  std::vector<int> chosen, parent(uz(n));
  std::vector<char> in_tree(uz(m));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[uz(v)] != v) v = parent[uz(v)];
    return v;
  };
  auto rec = [&](auto&& self, int i) -> void {
    if (static_cast<int>(chosen.size()) == n - 1) {
      ++trees;
      const SpanningTree t = tree_from_edges(el, chosen);
      std::fill(in_tree.begin(), in_tree.end(), 0);
      for (int e : chosen) in_tree[uz(e)] = 1;
      for (int e = 0; e < m; ++e)
        if (!in_tree[uz(e)]) exact_sum += Q(1, unicycle_cycle_length(el, t, e));
      return;
    }
    if (m - i < n - 1 - static_cast<int>(chosen.size())) return;
    const int a = find(el.edges[uz(i)].first), b = find(el.edges[uz(i)].second);
    if (a != b) {
      parent[uz(b)] = a;
      chosen.push_back(i);
      self(self, i + 1);
      chosen.pop_back();
      parent[uz(b)] = b;
    }
    self(self, i + 1);
  };
  rec(rec, 0);

  const UnicycleCensus census = unicycle_census(g);
  const bool exact_ok = exact_sum == Q(census.count);
  rep.add("trees", static_cast<double>(trees));
  rep.add("unicycles", census.count.convert_to<double>());
  rep.add("exact_pair_sum", exact_sum.numerator().convert_to<double>() / exact_sum.denominator().convert_to<double>());
  if (!exact_ok) rep.fail("sum over (tree, edge) pairs of 1/l differs from the unicycle count");
  if (BigInt(trees) != group_order_matrix_tree(g)) rep.fail("tree enumeration disagrees with matrix-tree count");

  if (m - n + 1 >= 1 && reps >= 2) {
    const UnicycleEstimates est = unicycle_estimators(g, reps, seed);
    const double scale = static_cast<double>(trees) * (m - n + 1);
    const double value = scale * est.inverse_length.value, se = scale * est.inverse_length.stderr_;
    const double target = census.count.convert_to<double>();
    rep.add("sampled_unicycles", value, se, reps);
    // Graphs where every unicycle has the same length give se ~ rounding error.
    const double z = (value - target) / std::max(se, 1e-12 * std::max(1.0, std::abs(target)));
    rep.add("z_score", z);
    if (std::abs(z) > 3) rep.fail("sampled unicycle count off by more than 3 standard errors");
  }
  return rep;
}

}  // namespace lapgrowth
