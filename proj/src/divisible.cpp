#include "lapgrowth/divisible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "lapgrowth/errors.hpp"

namespace lapgrowth {

namespace {

struct Box {
  Point lo, hi;
  bool empty = true;

  void add(const Point& row, int j0, int j1) {
    const int d = row.dim;
    Point a = row, b = row;
    a[d - 1] = j0;
    b[d - 1] = j1;
    if (empty) {
      lo = a;
      hi = b;
      empty = false;
      return;
    }
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], a[i]);
      hi[i] = std::max(hi[i], b[i]);
    }
  }

  void merge(const Box& o) {
    if (o.empty) return;
    if (empty) {
      *this = o;
      return;
    }
    for (int i = 0; i < lo.dim; ++i) {
      lo[i] = std::min(lo[i], o.lo[i]);
      hi[i] = std::max(hi[i], o.hi[i]);
    }
  }

  // Grown by one site and clipped to the window.
  Box grown(const Point& wlo, const Point& whi) const {
    Box b = *this;
    if (empty) return b;
    for (int i = 0; i < lo.dim; ++i) {
      b.lo[i] = std::max(wlo[i], lo[i] - 1);
      b.hi[i] = std::min(whi[i], hi[i] + 1);
    }
    return b;
  }

  std::int64_t rows() const {
    std::int64_t n = 1;
    for (int i = 0; i + 1 < lo.dim; ++i) n *= hi[i] - lo[i] + 1;
    return n;
  }

  Point row_start(std::int64_t r) const {
    Point p = lo;
    for (int i = lo.dim - 2; i >= 0; --i) {
      const std::int64_t ext = hi[i] - lo[i] + 1;
      p[i] = lo[i] + static_cast<std::int32_t>(r % ext);
      r /= ext;
    }
    return p;
  }
};

Box whole(const Grid<double>& g) { return {g.lo(), g.hi(), false}; }

bool odd(const Point& p) {
  int s = 0;
  for (int i = 0; i < p.dim; ++i) s += p[i];
  return (s & 1) != 0;
}

std::size_t shifted(std::size_t k, std::ptrdiff_t off) {
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off);
}

class DivisibleSolver {
 public:
  DivisibleSolver(const Grid<double>& sigma0, double tol, const DivisibleOptions& opt)
      : sigma_(sigma0),
        u_(sigma0.lo(), sigma0.hi(), 0.0),
        ring_(sigma0.ring_mask()),
        offs_(sigma0.neighbor_offsets()),
        inv2d_(1.0 / static_cast<double>(offs_.size())),
        tol_(tol),
        opt_(opt) {
    if (opt_.order == SweepOrder::kCheckerboard) excess_.assign(sigma_.size(), 0.0);
  }

  DivisibleResult run() {
    Box box = whole(sigma_);
    std::int64_t sweeps = 0;
    double worst = max_excess(box);
    while (worst >= tol_) {
      if (sweeps >= opt_.max_sweeps) throw ConvergenceError("divisible sandpile excess " + std::to_string(worst));
      Box toppled = opt_.order == SweepOrder::kRaster ? raster_sweep(box) : checkerboard_sweep(box);
      ++sweeps;
      box = toppled.grown(sigma_.lo(), sigma_.hi());
      worst = box.empty ? 0.0 : max_excess(box);
    }
    DivisibleResult r;
    r.max_excess = worst;
    r.sweeps = sweeps;
    r.mass = std::move(sigma_);
    r.odometer = std::move(u_);
    return r;
  }

 private:
  void check_ring(std::size_t k) const {
    if (sigma_[k] - 1.0 >= tol_)
      throw WindowOverflow("divisible sandpile reached the window ring at " + sigma_.point(k).to_string());
  }

  double max_excess(const Box& box) const {
    double worst = 0;
    const int d = sigma_.dim();
    const int len = box.hi[d - 1] - box.lo[d - 1] + 1;
    for (std::int64_t r = 0; r < box.rows(); ++r) {
      const std::size_t k0 = sigma_.unchecked_index(box.row_start(r));
      for (int j = 0; j < len; ++j) worst = std::max(worst, sigma_[k0 + static_cast<std::size_t>(j)] - 1.0);
    }
    return worst;
  }

  Box raster_sweep(const Box& box) {
    Box toppled;
    const int d = sigma_.dim();
    const int len = box.hi[d - 1] - box.lo[d - 1] + 1;
    for (std::int64_t r = 0; r < box.rows(); ++r) {
      const Point row = box.row_start(r);
      const std::size_t k0 = sigma_.unchecked_index(row);
      int jmin = len, jmax = -1;
      for (int j = 0; j < len; ++j) {
        const std::size_t k = k0 + static_cast<std::size_t>(j);
        if (!(sigma_[k] > 1.0)) continue;
        if (ring_[k]) {
          check_ring(k);
          continue;
        }
        const double e = sigma_[k] - 1.0;
        sigma_[k] = 1.0;
        u_[k] += e;
        const double share = e * inv2d_;
        for (auto off : offs_) sigma_[shifted(k, off)] += share;
        jmin = std::min(jmin, j);
        jmax = j;
      }
      if (jmax >= 0) toppled.add(row, box.lo[d - 1] + jmin, box.lo[d - 1] + jmax);
    }
    return toppled;
  }

  // Rows [r0, r1) of `box`, sites of the given parity: emit excess.
  void emit_rows(const Box& box, std::int64_t r0, std::int64_t r1, bool parity, Box& toppled) {
    const int d = sigma_.dim();
    const int len = box.hi[d - 1] - box.lo[d - 1] + 1;
    for (std::int64_t r = r0; r < r1; ++r) {
      const Point row = box.row_start(r);
      const std::size_t k0 = sigma_.unchecked_index(row);
      const int first = odd(row) == parity ? 0 : 1;
      int jmin = len, jmax = -1;
      for (int j = first; j < len; j += 2) {
        const std::size_t k = k0 + static_cast<std::size_t>(j);
        if (!(sigma_[k] > 1.0)) continue;
        if (ring_[k]) {
          check_ring(k);
          continue;
        }
        const double e = sigma_[k] - 1.0;
        sigma_[k] = 1.0;
        u_[k] += e;
        excess_[k] = e;
        jmin = std::min(jmin, j);
        jmax = j;
      }
      if (jmax >= 0) toppled.add(row, box.lo[d - 1] + jmin, box.lo[d - 1] + jmax);
    }
  }

  // Rows [r0, r1) of `box`, sites of the given parity: collect neighbours' excess.
  void absorb_rows(const Box& box, std::int64_t r0, std::int64_t r1, bool parity) {
    const int d = sigma_.dim();
    const int len = box.hi[d - 1] - box.lo[d - 1] + 1;
    for (std::int64_t r = r0; r < r1; ++r) {
      const Point row = box.row_start(r);
      const std::size_t k0 = sigma_.unchecked_index(row);
      const int first = odd(row) == parity ? 0 : 1;
      for (int j = first; j < len; j += 2) {
        const std::size_t k = k0 + static_cast<std::size_t>(j);
        double in = 0;
        if (!ring_[k]) {
          for (auto off : offs_) in += excess_[shifted(k, off)];
        } else {
          // ring sites: linear offsets may wrap around a row end
          const Point x = sigma_.point(k);
          for (const auto& y : neighbors(x))
            if (sigma_.contains(y)) in += excess_[sigma_.unchecked_index(y)];
        }
        if (in != 0.0) sigma_[k] += in * inv2d_;
      }
    }
  }

  void clear_rows(const Box& box, std::int64_t r0, std::int64_t r1) {
    const int d = sigma_.dim();
    const int len = box.hi[d - 1] - box.lo[d - 1] + 1;
    for (std::int64_t r = r0; r < r1; ++r) {
      const std::size_t k0 = sigma_.unchecked_index(box.row_start(r));
      std::fill_n(excess_.begin() + static_cast<std::ptrdiff_t>(k0), len, 0.0);
    }
  }

  template <class F>
  void parallel_rows(std::int64_t rows, F&& f) {
    const int t = std::max(1, std::min<int>(opt_.threads, static_cast<int>(rows)));
    if (t == 1) {
      f(0, 0, rows);
      return;
    }
    std::vector<std::jthread> pool;
    for (int i = 0; i < t; ++i) {
      const std::int64_t r0 = rows * i / t, r1 = rows * (i + 1) / t;
      pool.emplace_back([&f, i, r0, r1] { f(i, r0, r1); });
    }
  }

  Box checkerboard_sweep(const Box& box) {
    const Box region = box.grown(sigma_.lo(), sigma_.hi());
    Box toppled;
    for (bool parity : {false, true}) {
      const int t = std::max(1, opt_.threads);
      std::vector<Box> parts(static_cast<std::size_t>(t));
      parallel_rows(region.rows(), [&](int i, std::int64_t r0, std::int64_t r1) {
        emit_rows(region, r0, r1, parity, parts[static_cast<std::size_t>(i)]);
      });
      for (const auto& p : parts) toppled.merge(p);
      // Receivers of this half-sweep lie within one step of the emitters.
      const Box recv = region.grown(sigma_.lo(), sigma_.hi());
      parallel_rows(recv.rows(), [&](int, std::int64_t r0, std::int64_t r1) { absorb_rows(recv, r0, r1, !parity); });
      parallel_rows(region.rows(), [&](int, std::int64_t r0, std::int64_t r1) { clear_rows(region, r0, r1); });
    }
    return toppled;
  }

  Grid<double> sigma_;
  Grid<double> u_;
  std::vector<std::uint8_t> ring_;
  std::vector<std::ptrdiff_t> offs_;
  std::vector<double> excess_;
  double inv2d_;
  double tol_;
  DivisibleOptions opt_;
};

}  // namespace

DivisibleResult divisible_stabilize(const Grid<double>& sigma0, double tol, const DivisibleOptions& opt) {
  if (!(tol > 0)) throw std::invalid_argument("divisible_stabilize: tolerance must be positive");
  double total0 = 0;
  for (double v : sigma0.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("divisible_stabilize: non-finite mass");
    if (v < 0) throw std::invalid_argument("divisible_stabilize: negative mass");
    total0 += v;
  }
  DivisibleResult r = DivisibleSolver(sigma0, tol, opt).run();

  double total1 = 0;
  for (double v : r.mass.values()) total1 += v;
  r.mass_defect = std::abs(total1 - total0);

  const auto offs = r.mass.neighbor_offsets();
  const double inv2d = 1.0 / static_cast<double>(offs.size());
  for (std::size_t k = 0; k < r.mass.size(); ++k) {
    if (r.mass.on_ring(r.mass.point(k))) continue;
    double lap = 0;
    for (auto off : offs) lap += r.odometer[shifted(k, off)] - r.odometer[k];
    r.identity_defect = std::max(r.identity_defect, std::abs(r.mass[k] - sigma0[k] - inv2d * lap));
  }
  return r;
}

Cluster occupied_sites(const Grid<double>& mass, double tol) {
  return Cluster::from_grid(mass, [tol](double v) { return v >= 1.0 - tol; });
}

int point_source_window(double m, int d) { return static_cast<int>(std::ceil(radius_for_volume(m, d))) + 6; }

StatsReport point_source_shape(double m, int d, double tol, const GreenTable* green) {
  if (!(m > 0)) throw std::invalid_argument("point_source_shape: mass must be positive");
  const double r = radius_for_volume(m, d);
  Grid<double> sigma0 = Grid<double>::centered(d, point_source_window(m, d), 0.0);
  sigma0.at(Point(d)) = m;
  const auto run = divisible_stabilize(sigma0, tol);
  const Cluster D = occupied_sites(run.mass, tol);
  const Radii radii = inradius_outradius(D, Point(d));

  StatsReport rep("divisible point source m=" + format_double(m) + " d=" + std::to_string(d));
  rep.add("m", m);
  rep.add("r", r);
  rep.add("r_in", radii.inner);
  rep.add("r_out", radii.outer);
  rep.add("c_in", r - radii.inner);
  rep.add("c_out", radii.outer - r);
  rep.add("occupied", static_cast<double>(D.size()));
  rep.add("sweeps", static_cast<double>(run.sweeps));
  rep.add("max_excess", run.max_excess);
  rep.add("mass_defect", run.mass_defect);
  rep.add("identity_defect", run.identity_defect);

  if (green) {
    if (green->d != d) throw std::invalid_argument("point_source_shape: Green table dimension mismatch");
    const double base = m * green_asymptotic_radius(r, d) + r * r;
    double worst = 0;
    for (const auto& x : D.sites()) {
      if (!green->covers(x)) throw std::out_of_range("point_source_shape: Green table too small for " + x.to_string());
      const double predicted = m * (*green)(x) + static_cast<double>(x.norm2()) - base;
      worst = std::max(worst, std::abs(run.odometer.at(x) - predicted));
    }
    rep.add("odometer_deviation", worst);
  }
  return rep;
}

Grid<double> point_source_obstacle(double m, const GreenTable& green, int radius) {
  if (radius > green.R) throw std::out_of_range("point_source_obstacle: Green table radius too small");
  Grid<double> gamma = Grid<double>::centered(green.d, radius, 0.0);
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const Point x = gamma.point(k);
    gamma[k] = -static_cast<double>(x.norm2()) - m * green(x);
  }
  return gamma;
}

namespace {

struct ObstacleResiduals {
  double max_laplacian = -std::numeric_limits<double>::infinity();
  double gap = 0;
};

ObstacleResiduals obstacle_residuals(const Grid<double>& s, const Grid<double>& gamma,
                                     const std::vector<std::uint8_t>& ring, const std::vector<std::ptrdiff_t>& offs) {
  ObstacleResiduals res;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (ring[k]) continue;
    double lap = 0;
    for (auto off : offs) lap += s[shifted(k, off)] - s[k];
    res.max_laplacian = std::max(res.max_laplacian, lap);
    res.gap = std::max(res.gap, std::abs(std::min(-lap, s[k] - gamma[k])));
  }
  return res;
}

}  // namespace

ObstacleResult obstacle_solve(const Grid<double>& gamma, double tol, std::int64_t max_sweeps) {
  if (!(tol > 0)) throw std::invalid_argument("obstacle_solve: tolerance must be positive");
  for (double v : gamma.values())
    if (!std::isfinite(v)) throw std::invalid_argument("obstacle_solve: non-finite obstacle");

  ObstacleResult out;
  out.s = gamma;
  auto& s = out.s;
  const auto ring = s.ring_mask();
  const auto offs = s.neighbor_offsets();
  const double inv2d = 1.0 / static_cast<double>(offs.size());

  ObstacleResiduals res = obstacle_residuals(s, gamma, ring, offs);
  while (res.max_laplacian > tol || res.gap > tol) {
    if (out.sweeps >= max_sweeps) throw ConvergenceError("obstacle solve gap " + std::to_string(res.gap));
    for (int rep = 0; rep < 16; ++rep, ++out.sweeps) {
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (ring[k]) continue;
        double mean = 0;
        for (auto off : offs) mean += s[shifted(k, off)];
        s[k] = std::max(gamma[k], mean * inv2d);
      }
    }
    res = obstacle_residuals(s, gamma, ring, offs);
  }
  out.max_laplacian = res.max_laplacian;
  out.complementarity_gap = res.gap;

  for (std::size_t k = 0; k < s.size(); ++k) {
    if (ring[k]) continue;
    bool next_to_ring = false;
    for (auto off : offs) next_to_ring = next_to_ring || ring[shifted(k, off)];
    if (next_to_ring && s[k] > gamma[k] + tol)
      throw WindowOverflow("obstacle noncoincidence set touches the window ring at " + s.point(k).to_string());
  }
  return out;
}

StatsReport obstacle_toppling_gap(double m, const GreenTable& green, double tol) {
  const int d = green.d;
  const int radius = static_cast<int>(std::ceil(radius_for_volume(m, d))) + 10;
  const Grid<double> gamma = point_source_obstacle(m, green, radius);
  const ObstacleResult obs = obstacle_solve(gamma, tol);

  Grid<double> sigma0(gamma.lo(), gamma.hi(), 0.0);
  sigma0.at(Point(d)) = m;
  const auto run = divisible_stabilize(sigma0, tol);

  double worst = 0;
  std::int64_t noncoincidence = 0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const double obstacle_u = obs.s[k] - gamma[k];
    if (obstacle_u <= 0 && run.odometer[k] <= 0) continue;
    ++noncoincidence;
    worst = std::max(worst, std::abs(run.odometer[k] - obstacle_u));
  }
  StatsReport rep("obstacle vs toppling m=" + format_double(m));
  rep.add("max_gap", worst);
  rep.add("gap_over_m", worst / m);
  rep.add("noncoincidence_sites", static_cast<double>(noncoincidence));
  rep.add("obstacle_sweeps", static_cast<double>(obs.sweeps));
  rep.add("toppling_sweeps", static_cast<double>(run.sweeps));
  rep.add("complementarity_gap", obs.complementarity_gap);
  return rep;
}

MultiSourceResult multi_source(const std::vector<Source>& sources, double tol, const DivisibleOptions& opt) {
  if (sources.empty()) throw std::invalid_argument("multi_source: no sources");
  const int d = sources.front().at.dim;
  double total = 0;
  Point lo = sources.front().at, hi = lo;
  for (const auto& s : sources) {
    if (s.at.dim != d) throw std::invalid_argument("multi_source: mixed dimensions");
    if (!(s.mass > 0)) throw std::invalid_argument("multi_source: masses must be positive");
    total += s.mass;
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], s.at[i]);
      hi[i] = std::max(hi[i], s.at[i]);
    }
  }
  const int pad = static_cast<int>(std::ceil(radius_for_volume(total, d))) + 4;
  for (int i = 0; i < d; ++i) {
    lo[i] -= pad;
    hi[i] += pad;
  }
  Grid<double> sigma0(lo, hi, 0.0);
  for (const auto& s : sources) sigma0.at(s.at) += s.mass;
  MultiSourceResult out;
  out.run = divisible_stabilize(sigma0, tol, opt);
  out.cluster = occupied_sites(out.run.mass, tol);
  return out;
}

std::vector<HarmonicPolynomial> harmonic_polynomials(int d) {
  std::vector<HarmonicPolynomial> hs;
  hs.push_back({"one", 0, [](const double*) { return 1.0; }});
  for (int i = 0; i < d; ++i) hs.push_back({"x" + std::to_string(i + 1), 1, [i](const double* x) { return x[i]; }});
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      hs.push_back({"x" + std::to_string(i + 1) + "x" + std::to_string(j + 1), 2,
                    [i, j](const double* x) { return x[i] * x[j]; }});
  for (int j = 1; j < d; ++j)
    hs.push_back({"x1^2-x" + std::to_string(j + 1) + "^2", 2, [j](const double* x) { return x[0] * x[0] - x[j] * x[j]; }});
  if (d == 2) {
    hs.push_back({"re_z3", 3, [](const double* x) { return x[0] * x[0] * x[0] - 3 * x[0] * x[1] * x[1]; }});
    hs.push_back({"im_z3", 3, [](const double* x) { return 3 * x[0] * x[0] * x[1] - x[1] * x[1] * x[1]; }});
  }
  return hs;
}

StatsReport quadrature_check(const Cluster& c, const std::vector<Point>& sources, const std::vector<double>& weights,
                             double r) {
  if (sources.size() != weights.size()) throw std::invalid_argument("quadrature_check: one weight per source");
  if (c.empty()) throw std::invalid_argument("quadrature_check: empty cluster");
  if (!(r > 0)) throw std::invalid_argument("quadrature_check: scale must be positive");
  const int d = c.dim();
  const double cell = std::pow(r, -d);
  StatsReport rep("quadrature identity");
  double x[kMaxDim];
  auto scaled = [&](const Point& p) {
    for (int i = 0; i < d; ++i) x[i] = p[i] / r;
    return x;
  };
  for (const auto& h : harmonic_polynomials(d)) {
    double lhs = 0, mass = 0;
    for (const auto& y : c.sites()) {
      const double v = h.eval(scaled(y));
      lhs += v;
      mass += std::abs(v);
    }
    lhs *= cell;
    mass *= cell;
    double rhs = 0;
    for (std::size_t i = 0; i < sources.size(); ++i) rhs += weights[i] * h.eval(scaled(sources[i]));
    rep.add(h.name + "_lhs", lhs);
    rep.add(h.name + "_rhs", rhs);
    rep.add(h.name + "_rel", mass > 0 ? std::abs(lhs - rhs) / mass : std::abs(lhs - rhs));
  }
  return rep;
}

namespace {

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double vx = bx - ax, vy = by - ay;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * vx), py - (ay + t * vy));
}

}  // namespace

double two_source_boundary_error(double a, int r) {
  if (!(a >= 1)) throw std::invalid_argument("two_source_boundary_error: requires a >= 1");
  if (r < 1) throw std::invalid_argument("two_source_boundary_error: r must be positive");
  const double m = std::floor(std::numbers::pi * (a * r) * (a * r));
  const auto res = multi_source({{Point{r, 0}, m}, {Point{-r, 0}, m}}, default_divisible_tolerance(2 * m));

  std::vector<std::pair<double, double>> bnd;
  for (const auto& p : res.cluster.boundary_sites()) bnd.emplace_back(p[0] / static_cast<double>(r), p[1] / static_cast<double>(r));

  constexpr int kSamples = 20000;
  std::vector<std::pair<double, double>> curve;
  curve.reserve(kSamples + 1);
  for (int i = 0; i <= kSamples; ++i) {
    const double th = 2 * std::numbers::pi * i / kSamples;
    const double rho = std::sqrt(std::max(0.0, 2 * (a * a + std::cos(2 * th))));
    curve.emplace_back(rho * std::cos(th), rho * std::sin(th));
  }

  double worst = 0;
  for (const auto& [px, py] : bnd) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
      best = std::min(best, segment_distance(px, py, curve[i].first, curve[i].second, curve[i + 1].first, curve[i + 1].second));
    worst = std::max(worst, best);
  }
  for (const auto& [cx, cy] : curve) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [px, py] : bnd) best = std::min(best, std::hypot(cx - px, cy - py));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace lapgrowth
