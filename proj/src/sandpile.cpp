#include "lapgrowth/sandpile.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "lapgrowth/errors.hpp"
#include "lapgrowth/rng.hpp"

namespace lapgrowth {

bool SandpileField::is_stable() const {
  const std::int32_t cap = 2 * heights.dim() - 1;
  for (auto h : heights.values())
    if (h > cap) return false;
  return true;
}

std::int64_t SandpileField::total() const {
  std::int64_t s = 0;
  for (auto h : heights.values()) s += h;
  return s;
}

namespace {

std::size_t shifted(std::size_t k, std::ptrdiff_t off) {
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off);
}

class Toppler {
 public:
  Toppler(const SandpileField& s, BoundaryMode mode)
      : h_(s.heights),
        u_(s.heights.lo(), s.heights.hi(), 0),
        ring_(h_.ring_mask()),
        offs_(h_.neighbor_offsets()),
        two_d_(static_cast<std::int32_t>(offs_.size())),
        mode_(mode) {}

  bool unstable(std::size_t k) const { return h_[k] >= two_d_; }

  // An unstable site the rules forbid from toppling.
  bool blocked(std::size_t k) {
    if (!ring_[k]) return false;
    if (mode_ == BoundaryMode::kStrict && unstable(k))
      throw WindowOverflow("sandpile site " + h_.point(k).to_string() + " on the window ring must topple");
    return true;
  }

  // Topples k `times` times; calls on_unstable(j) for neighbours that are now unstable.
  template <class F>
  void topple(std::size_t k, std::int32_t times, F&& on_unstable) {
    h_[k] -= times * two_d_;
    u_[k] += static_cast<std::uint64_t>(times);
    for (auto off : offs_) {
      const std::size_t j = shifted(k, off);
      h_[j] += times;
      if (unstable(j) && !blocked(j)) on_unstable(j);
    }
  }

  Stabilization finish() {
    Stabilization r;
    if (mode_ == BoundaryMode::kAbsorbing) {
      for (std::size_t k = 0; k < h_.size(); ++k)
        if (ring_[k]) {
          r.absorbed += h_[k];
          h_[k] = 0;
        }
    }
    r.field.heights = std::move(h_);
    r.odometer.counts = std::move(u_);
    return r;
  }

  Grid<std::int32_t> h_;
  Grid<std::uint64_t> u_;
  std::vector<std::uint8_t> ring_;
  std::vector<std::ptrdiff_t> offs_;
  std::int32_t two_d_;
  BoundaryMode mode_;
};

template <bool kLifo>
void run_queue(Toppler& t) {
  std::deque<std::size_t> work;
  std::vector<std::uint8_t> queued(t.h_.size(), 0);
  auto push = [&](std::size_t j) {
    if (!queued[j]) {
      queued[j] = 1;
      work.push_back(j);
    }
  };
  for (std::size_t k = 0; k < t.h_.size(); ++k)
    if (t.unstable(k) && !t.blocked(k)) push(k);
  while (!work.empty()) {
    std::size_t k;
    if constexpr (kLifo) {
      k = work.back();
      work.pop_back();
    } else {
      k = work.front();
      work.pop_front();
    }
    queued[k] = 0;
    if (!t.unstable(k)) continue;
    t.topple(k, t.h_[k] / t.two_d_, push);
  }
}

void run_random(Toppler& t, std::uint64_t seed) {
  RngStream rng(seed);
  constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> list;
  std::vector<std::size_t> pos(t.h_.size(), kAbsent);
  auto add = [&](std::size_t j) {
    if (pos[j] == kAbsent) {
      pos[j] = list.size();
      list.push_back(j);
    }
  };
  for (std::size_t k = 0; k < t.h_.size(); ++k)
    if (t.unstable(k) && !t.blocked(k)) add(k);
  while (!list.empty()) {
    const std::size_t i = static_cast<std::size_t>(rng.below(list.size()));
    const std::size_t k = list[i];
    t.topple(k, 1, add);
    if (!t.unstable(k)) {
      const std::size_t last = list.back();
      list[i] = last;
      pos[last] = i;
      list.pop_back();
      pos[k] = kAbsent;
    }
  }
}

void run_sweep(Toppler& t) {
  bool any = true;
  while (any) {
    any = false;
    for (std::size_t k = 0; k < t.h_.size(); ++k) {
      if (!t.unstable(k) || t.blocked(k)) continue;
      t.topple(k, t.h_[k] / t.two_d_, [](std::size_t) {});
      any = true;
    }
  }
}

}  // namespace

Stabilization stabilize(const SandpileField& s, TopplePolicy policy, std::uint64_t seed, BoundaryMode mode) {
  Toppler t(s, mode);
  switch (policy) {
    case TopplePolicy::kFifo: run_queue<false>(t); break;
    case TopplePolicy::kLifo: run_queue<true>(t); break;
    case TopplePolicy::kRandom: run_random(t, seed); break;
    case TopplePolicy::kSweep: run_sweep(t); break;
  }
  return t.finish();
}

bool check_stabilization_identity(const SandpileField& s, const Stabilization& r, BoundaryMode mode) {
  const auto& u = r.odometer.counts;
  const auto& h0 = s.heights;
  const auto& h1 = r.field.heights;
  if (!u.same_shape(h0) || !h1.same_shape(h0)) return false;
  const auto two_d = static_cast<std::int64_t>(2 * h0.dim());
  for (std::size_t k = 0; k < h0.size(); ++k) {
    const Point x = h0.point(k);
    if (mode == BoundaryMode::kAbsorbing && h0.on_ring(x)) continue;
    std::int64_t lap = -two_d * static_cast<std::int64_t>(u[k]);
    for (const auto& y : neighbors(x)) lap += static_cast<std::int64_t>(u.value_or(y, 0));
    if (static_cast<std::int64_t>(h1[k]) != static_cast<std::int64_t>(h0[k]) + lap) return false;
  }
  return true;
}

LeastActionReport verify_least_action(const SandpileField& s, const Grid<std::uint64_t>& w) {
  const auto& h = s.heights;
  if (!w.same_shape(h)) throw std::invalid_argument("verify_least_action: w and s must share a window");
  const int d = h.dim();
  const std::int64_t cap = 2 * d - 1;
  LeastActionReport rep;

  auto lap_at = [&](const Point& x) {
    std::int64_t acc = -2 * d * static_cast<std::int64_t>(w.value_or(x, 0));
    for (const auto& y : neighbors(x)) acc += static_cast<std::int64_t>(w.value_or(y, 0));
    return acc;
  };

  // Sites just outside the box see w only through their single in-box
  // neighbour, so they are checked along with the window itself.
  Point lo = h.lo(), hi = h.hi();
  for (int i = 0; i < d; ++i) {
    lo[i] -= 1;
    hi[i] += 1;
  }
  Grid<std::uint8_t> shell(lo, hi, 0);
  for (std::size_t k = 0; k < shell.size() && !rep.lap_violation; ++k) {
    const Point x = shell.point(k);
    const std::int64_t sx = h.value_or(x, 0);
    if (sx + lap_at(x) > cap) rep.lap_violation = x;
  }
  rep.satisfies_lap = !rep.lap_violation;
  if (!rep.satisfies_lap) return rep;

  SandpileField padded{Grid<std::int32_t>(lo, hi, 0)};
  for (std::size_t k = 0; k < h.size(); ++k) padded.heights.at(h.point(k)) = h[k];
  const auto st = stabilize(padded);
  for (std::size_t k = 0; k < st.odometer.counts.size(); ++k) {
    const Point x = st.odometer.counts.point(k);
    if (st.odometer.counts[k] > w.value_or(x, 0)) {
      rep.dominance_violation = x;
      break;
    }
  }
  rep.dominates = !rep.dominance_violation;
  return rep;
}

SingleSource single_source(std::int64_t n, int d, TopplePolicy policy) {
  if (n < 1) throw std::invalid_argument("single_source: n must be >= 1");
  if (n > std::numeric_limits<std::int32_t>::max()) throw std::invalid_argument("single_source: n exceeds 32-bit heights");
  const int radius = static_cast<int>(std::ceil(radius_for_volume(static_cast<double>(n), d))) + kSandpileWindowMargin;
  SandpileField s{Grid<std::int32_t>::centered(d, radius, 0)};
  s.heights.at(Point(d)) = static_cast<std::int32_t>(n);
  auto st = stabilize(s, policy);

  std::vector<Point> pts;
  for (std::size_t k = 0; k < st.field.heights.size(); ++k)
    if (st.field.heights[k] > 0 || st.odometer.counts[k] > 0) pts.push_back(st.field.heights.point(k));
  return {std::move(st.field), std::move(st.odometer), Cluster(std::move(pts))};
}

namespace {

std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  // den > 0 (boost::rational keeps the denominator positive)
  std::int64_t q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return q;
}

std::int64_t ceil_quadratic(const RationalMatrix& A, const Point& x) {
  Rational q(0);
  const auto d = A.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      q += A[i][j] * Rational(static_cast<std::int64_t>(x[static_cast<int>(i)]) * x[static_cast<int>(j)]);
  q /= 2;
  return ceil_div(q.numerator(), q.denominator());
}

void check_symmetric(const RationalMatrix& A, int d) {
  if (static_cast<int>(A.size()) != d) throw std::invalid_argument("quadratic_sandpile: A must be d x d");
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != A.size()) throw std::invalid_argument("quadratic_sandpile: A must be square");
    for (std::size_t j = 0; j < i; ++j)
      if (A[i][j] != A[j][i]) throw std::invalid_argument("quadratic_sandpile: A must be symmetric");
  }
}

}  // namespace

SandpileField quadratic_sandpile(const RationalMatrix& A, const Point& lo, const Point& hi) {
  check_symmetric(A, lo.dim);
  Point plo = lo, phi = hi;
  for (int i = 0; i < lo.dim; ++i) {
    plo[i] -= 1;
    phi[i] += 1;
  }
  Grid<std::int64_t> cq(plo, phi, 0);
  for (std::size_t k = 0; k < cq.size(); ++k) cq[k] = ceil_quadratic(A, cq.point(k));

  SandpileField s{Grid<std::int32_t>(lo, hi, 0)};
  for (std::size_t k = 0; k < s.heights.size(); ++k) {
    const std::int64_t v = laplacian(cq, s.heights.point(k));
    if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
      throw std::overflow_error("quadratic_sandpile: height exceeds 32 bits");
    s.heights[k] = static_cast<std::int32_t>(v);
  }
  return s;
}

StatsReport local_stabilization_probe(const RationalMatrix& A, const std::vector<int>& sizes,
                                      std::int32_t extra_at_origin) {
  if (sizes.empty()) throw std::invalid_argument("local_stabilization_probe: no box sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("local_stabilization_probe: sizes must increase");
  const int d = static_cast<int>(A.size());
  StatsReport rep("local stabilization probe");
  std::vector<std::uint64_t> u0;
  for (int L : sizes) {
    Point lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = -(L + 1);
      hi[i] = L + 1;
    }
    SandpileField s = quadratic_sandpile(A, lo, hi);
    const auto ring = s.heights.ring_mask();
    for (std::size_t k = 0; k < s.heights.size(); ++k)
      if (ring[k]) s.heights[k] = 0;
    s.heights.at(Point(d)) += extra_at_origin;
    const auto st = stabilize(s, TopplePolicy::kFifo, 0, BoundaryMode::kAbsorbing);
    u0.push_back(st.odometer.counts.at(Point(d)));
    rep.add("u0_L" + std::to_string(L), static_cast<double>(u0.back()));
  }
  const bool bounded = u0.size() >= 2 && u0[u0.size() - 1] == u0[u0.size() - 2];
  rep.add("bounded_heuristic", bounded ? 1.0 : 0.0);
  rep.note("HEURISTIC: finite-window odometer growth only; local stabilization on Z^d is not decided here");
  return rep;
}

}  // namespace lapgrowth
