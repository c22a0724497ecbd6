#include "lapgrowth/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "lapgrowth/errors.hpp"
#include "lapgrowth/rng.hpp"

namespace lapgrowth {

RotorMechanism::RotorMechanism(std::vector<std::uint8_t> order) : order_(std::move(order)) {
  const std::size_t n = order_.size();
  if (n < 2 || n % 2 != 0 || n > 2 * kMaxDim) throw std::invalid_argument("RotorMechanism: need 2d directions");
  std::vector<std::uint8_t> seen(n, 0);
  for (auto dir : order_) {
    if (dir >= n || seen[dir]) throw std::invalid_argument("RotorMechanism: order must be a permutation");
    seen[dir] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) next_[order_[i]] = order_[(i + 1) % n];
}

RotorMechanism RotorMechanism::clockwise() { return RotorMechanism({kNorth, kEast, kSouth, kWest}); }
RotorMechanism RotorMechanism::counterclockwise() { return RotorMechanism({kNorth, kWest, kSouth, kEast}); }

RotorMechanism RotorMechanism::standard(int d) {
  std::vector<std::uint8_t> order(static_cast<std::size_t>(2 * d));
  std::iota(order.begin(), order.end(), std::uint8_t{0});
  return RotorMechanism(std::move(order));
}

std::string RotorInit::describe() const {
  if (kind == Kind::kRandom) return "random(" + std::to_string(seed) + ")";
  static const char* names[] = {"E", "W", "N", "S"};
  return dir < 4 ? std::string("all-") + names[dir] : "all-" + std::to_string(dir);
}

std::uint8_t initial_rotor(const RotorInit& init, const Point& x) {
  const auto two_d = static_cast<std::uint64_t>(2 * x.dim);
  if (init.kind == RotorInit::Kind::kUniform) {
    if (init.dir >= two_d) throw std::invalid_argument("initial_rotor: direction out of range");
    return init.dir;
  }
  std::uint64_t h = splitmix64(init.seed);
  for (int i = 0; i < x.dim; ++i) h = splitmix64(h ^ static_cast<std::uint32_t>(x[i]));
  return static_cast<std::uint8_t>(h % two_d);
}

RotorState make_rotor_state(int d, int radius, const RotorMechanism& mech, const RotorInit& init) {
  if (mech.dim() != d) throw std::invalid_argument("make_rotor_state: mechanism dimension mismatch");
  RotorState st{Grid<std::uint8_t>::centered(d, radius, 0), mech};
  for (std::size_t k = 0; k < st.dirs.size(); ++k) st.dirs[k] = initial_rotor(init, st.dirs.point(k));
  return st;
}

int rotor_window(std::int64_t n, int d) {
  const double r = radius_for_volume(static_cast<double>(n), d);
  return static_cast<int>(std::ceil(r + 2 * std::log(r + 2))) + 4;
}

Point rotor_step(RotorState& state, const Point& pos) {
  const std::size_t k = state.dirs.index(pos);
  if (state.dirs.on_ring(pos)) throw WindowOverflow("rotor walker on the window ring at " + pos.to_string());
  const std::uint8_t dir = state.mech.next(state.dirs[k]);
  state.dirs[k] = dir;
  return pos + unit(pos.dim, dir / 2, dir % 2 == 0 ? 1 : -1);
}

namespace {

std::size_t shifted(std::size_t k, std::ptrdiff_t off) {
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off);
}

void overflow_at(const Grid<std::uint8_t>& g, std::size_t k) {
  throw WindowOverflow("rotor walker on the window ring at " + g.point(k).to_string());
}

}  // namespace

EdgeFlow edge_flow_from_odometer(const Grid<std::uint64_t>& u, const Grid<std::uint8_t>& initial,
                                 const RotorMechanism& mech) {
  if (!u.same_shape(initial)) throw std::invalid_argument("edge_flow_from_odometer: mismatched windows");
  const auto& order = mech.order();
  const std::uint64_t two_d = order.size();
  std::array<std::uint64_t, 2 * kMaxDim> pos{};
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  EdgeFlow flow{Grid<std::array<std::uint64_t, 2 * kMaxDim>>(u.lo(), u.hi(), {})};
  for (std::size_t k = 0; k < u.size(); ++k) {
    // the j-th exit (j >= 1) leaves along order[(p0 + j) mod 2d]
    const std::uint64_t p0 = pos[initial[k]];
    for (std::size_t dir = 0; dir < two_d; ++dir) {
      const std::uint64_t first = (pos[dir] + two_d - p0 - 1) % two_d;  // j - 1 of the first exit along dir
      flow.exits[k][dir] = u[k] > first ? (u[k] - first - 1) / two_d + 1 : 0;
    }
  }
  return flow;
}

RotorRun rotor_aggregate(std::int64_t n, RotorState state) {
  if (n < 1) throw std::invalid_argument("rotor_aggregate: n must be >= 1");
  const Grid<std::uint8_t> initial = state.dirs;
  auto& dirs = state.dirs;
  const auto offs = dirs.neighbor_offsets();
  std::array<std::uint8_t, 2 * kMaxDim> next{};
  for (std::size_t dir = 0; dir < offs.size(); ++dir) next[dir] = state.mech.next(static_cast<std::uint8_t>(dir));

  // bit 0: occupied, bit 1: on the window ring
  std::vector<std::uint8_t> site = dirs.ring_mask();
  for (auto& b : site) b = static_cast<std::uint8_t>(b << 1);
  Grid<std::uint64_t> u(dirs.lo(), dirs.hi(), 0);
  const std::size_t origin = dirs.index(Point(dirs.dim()));

  std::vector<Point> sites;
  std::vector<std::int64_t> arrival;
  sites.reserve(static_cast<std::size_t>(n));
  arrival.reserve(static_cast<std::size_t>(n));
  for (std::int64_t w = 1; w <= n; ++w) {
    std::size_t k = origin;
    while (site[k] & 1) {
      if (site[k] & 2) overflow_at(dirs, k);
      const std::uint8_t dir = next[dirs[k]];
      dirs[k] = dir;
      ++u[k];
      k = shifted(k, offs[dir]);
    }
    site[k] |= 1;
    sites.push_back(dirs.point(k));
    arrival.push_back(w);
  }

  RotorRun run;
  run.cluster = Cluster(std::move(sites), std::move(arrival));
  run.flow = edge_flow_from_odometer(u, initial, state.mech);
  run.odometer = std::move(u);
  run.state = std::move(state);
  return run;
}

RotorRun rotor_run(std::int64_t n, int d, const RotorMechanism& mech, const RotorInit& init) {
  return rotor_aggregate(n, make_rotor_state(d, rotor_window(n, d), mech, init));
}

StatsReport check_odometer_flow(const Grid<std::uint64_t>& u, const EdgeFlow& flow) {
  if (!u.same_shape(flow.exits)) throw std::invalid_argument("check_odometer_flow: mismatched windows");
  const int d = u.dim();
  const std::int64_t two_d = 2 * d;
  StatsReport rep("rotor odometer flow");
  std::int64_t worst = 0, edges = 0, spread = 0;
  bool consistent = true;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Point x = u.point(k);
    const auto& nx = flow.exits[k];
    std::uint64_t total = 0, lo = nx[0], hi = nx[0];
    for (int dir = 0; dir < two_d; ++dir) {
      total += nx[static_cast<std::size_t>(dir)];
      lo = std::min(lo, nx[static_cast<std::size_t>(dir)]);
      hi = std::max(hi, nx[static_cast<std::size_t>(dir)]);
    }
    consistent = consistent && total == u[k];
    spread = std::max(spread, static_cast<std::int64_t>(hi - lo));
    // each undirected edge once: x -> x + e_i
    for (int i = 0; i < d; ++i) {
      const Point y = x + unit(d, i);
      if (!u.contains(y)) continue;
      const auto& ny = flow.exits.at(y);
      const auto theta = static_cast<std::int64_t>(nx[static_cast<std::size_t>(2 * i)]) -
                         static_cast<std::int64_t>(ny[static_cast<std::size_t>(2 * i + 1)]);
      const std::int64_t beta =
          static_cast<std::int64_t>(u[k]) - static_cast<std::int64_t>(u.at(y)) - two_d * theta;
      worst = std::max(worst, std::abs(beta));
      ++edges;
    }
  }
  rep.add("max_flow_defect", static_cast<double>(worst));
  rep.add("bound", static_cast<double>(4 * d - 2));
  rep.add("edges", static_cast<double>(edges));
  rep.add("max_counter_spread", static_cast<double>(spread));
  if (worst > 4 * d - 2) rep.fail("flow defect " + std::to_string(worst) + " exceeds 4d-2");
  if (!consistent) rep.fail("odometer differs from the sum of exit counters");
  if (spread > 1) rep.fail("exit counters at one site differ by more than 1");
  return rep;
}

std::int64_t net_inflow(const EdgeFlow& flow, const Point& lo, const Point& hi) {
  const auto& g = flow.exits;
  Grid<std::uint8_t> box(lo, hi, 0);
  const int d = g.dim();
  std::int64_t net = 0;
  for (std::size_t k = 0; k < box.size(); ++k) {
    const Point x = box.point(k);
    for (int dir = 0; dir < 2 * d; ++dir) {
      const Point y = x + unit(d, dir / 2, dir % 2 == 0 ? 1 : -1);
      if (box.contains(y)) continue;
      const int back = dir ^ 1;
      net += static_cast<std::int64_t>(g.value_or(y, {})[static_cast<std::size_t>(back)]);
      net -= static_cast<std::int64_t>(g.at(x)[static_cast<std::size_t>(dir)]);
    }
  }
  return net;
}

StatsReport smoothed_laplacian(const Grid<std::uint64_t>& u, int k, const Cluster& cluster) {
  if (k < 2) throw std::invalid_argument("smoothed_laplacian: k must be >= 2");
  const int d = u.dim();
  const double two_d = 2.0 * d;
  StatsReport rep("smoothed odometer laplacian k=" + std::to_string(k));

  // laplacian(u) everywhere it is defined; u vanishes outside the window.
  Grid<double> lap(u.lo(), u.hi(), 0.0);
  double worst_raw = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point x = u.point(i);
    double acc = -two_d * static_cast<double>(u[i]);
    for (const auto& y : neighbors(x)) acc += static_cast<double>(u.value_or(y, 0));
    lap[i] = acc;
    if (!x.is_origin()) worst_raw = std::max(worst_raw, std::abs(acc));
  }
  rep.add("max_abs_laplacian_off_origin", worst_raw);
  rep.add("laplacian_bound", 8.0 * d * d);
  if (worst_raw > 8.0 * d * d) rep.fail("|laplacian(u)| exceeds 8d^2 off the origin");

  const Point origin(d);
  const auto ball_k = ball_sites(origin, k);
  const auto ball_k1 = ball_sites(origin, k + 1);
  double worst = 0;
  std::int64_t admissible = 0;
  for (const auto& x : cluster.sites()) {
    bool ok = true;
    for (const auto& off : ball_k1) {
      const Point y = x + off;
      if (y.is_origin() || !cluster.contains(y)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // laplacian commutes with the ball average
    double mean = 0;
    for (const auto& off : ball_k) mean += lap.at(x + off);
    mean /= static_cast<double>(ball_k.size());
    worst = std::max(worst, std::abs(mean / two_d - 1.0));
    ++admissible;
  }
  rep.add("max_smoothed_deviation", worst);
  rep.add("admissible_sites", static_cast<double>(admissible));
  if (admissible == 0) rep.note("no admissible sites: cluster too small for this k");
  return rep;
}

std::vector<LatticeHarmonic> lattice_harmonics(int d) {
  std::vector<LatticeHarmonic> hs;
  for (int i = 0; i < d; ++i) hs.push_back({"x" + std::to_string(i + 1), [i](const Point& x) { return std::int64_t{x[i]}; }});
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      hs.push_back({"x" + std::to_string(i + 1) + "x" + std::to_string(j + 1),
                    [i, j](const Point& x) { return std::int64_t{x[i]} * x[j]; }});
  for (int j = 1; j < d; ++j)
    hs.push_back({"x1^2-x" + std::to_string(j + 1) + "^2",
                  [j](const Point& x) { return std::int64_t{x[0]} * x[0] - std::int64_t{x[j]} * x[j]; }});
  if (d == 2) {
    hs.push_back({"re_z3", [](const Point& p) {
                    const std::int64_t x = p[0], y = p[1];
                    return x * x * x - 3 * x * y * y;
                  }});
    hs.push_back({"im_z3", [](const Point& p) {
                    const std::int64_t x = p[0], y = p[1];
                    return 3 * x * x * y - y * y * y;
                  }});
  }
  return hs;
}

StatsReport harmonic_balance(const Cluster& c, const LatticeHarmonic& h) {
  if (c.empty()) throw std::invalid_argument("harmonic_balance: empty cluster");
  const int d = c.dim();
  StatsReport rep("harmonic balance " + h.name);
  std::int64_t sum = 0, rhs = 0;
  bool harmonic = true;
  for (const auto& x : c.sites()) {
    const std::int64_t hx = h.h(x);
    sum += hx;
    std::int64_t lap = 0;
    for (const auto& y : neighbors(x)) {
      const std::int64_t hy = h.h(y);
      rhs += std::abs(hx - hy);
      lap += hy - hx;
    }
    harmonic = harmonic && lap == 0;
  }
  const auto n = static_cast<std::int64_t>(c.size());
  const std::int64_t lhs = std::abs(sum - n * h.h(Point(d)));
  rep.add("lhs", static_cast<double>(lhs));
  rep.add("rhs", static_cast<double>(rhs));
  rep.add("slack", static_cast<double>(rhs - lhs));
  if (!harmonic) rep.fail(h.name + " is not harmonic on the cluster");
  if (rhs < lhs) rep.fail("negative slack for " + h.name);
  return rep;
}

StatsReport tentacle_density(const Cluster& c, int samples, const std::vector<double>& rho_list) {
  if (samples < 1) throw std::invalid_argument("tentacle_density: samples must be >= 1");
  StatsReport rep("tentacle density");
  auto boundary = c.boundary_sites();
  std::sort(boundary.begin(), boundary.end());
  const int d = c.dim();
  double worst = std::numeric_limits<double>::infinity();
  std::int64_t pairs = 0;
  const std::size_t step = std::max<std::size_t>(1, boundary.size() / static_cast<std::size_t>(samples));
  for (std::size_t i = 0; i < boundary.size(); i += step) {
    const Point& z = boundary[i];
    for (double rho : rho_list) {
      if (!(rho < z.norm())) continue;
      std::int64_t count = 0;
      for (const auto& y : ball_sites(z, rho))
        if (c.contains(y)) ++count;
      worst = std::min(worst, static_cast<double>(count) / std::pow(rho, d));
      ++pairs;
    }
  }
  rep.add("min_density", pairs > 0 ? worst : 0.0);
  rep.add("pairs", static_cast<double>(pairs));
  if (pairs == 0) rep.note("vacuous: no admissible (z0, rho) pair");
  return rep;
}

StatsReport fluctuation_scan(const std::vector<std::int64_t>& n_list, int d, const RotorMechanism& mech,
                             const RotorInit& init) {
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("fluctuation_scan: n_list must increase");
  StatsReport rep("rotor fluctuations " + init.describe());
  double worst = 0;
  for (auto n : n_list) {
    const auto run = rotor_run(n, d, mech, init);
    const double r = radius_for_volume(static_cast<double>(n), d);
    const Radii radii = inradius_outradius(run.cluster, Point(d));
    const std::string tag = "_n" + std::to_string(n);
    rep.add("r" + tag, r);
    rep.add("inner_gap" + tag, r - radii.inner);
    rep.add("outer_gap" + tag, radii.outer - r);
    rep.add("width" + tag, radii.outer - radii.inner);
    if (r > 1) {
      const double norm = (radii.outer - radii.inner) / std::log(r);
      rep.add("normalized" + tag, norm);
      worst = std::max(worst, norm);
    }
  }
  rep.add("max_normalized", worst);
  return rep;
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 1; p <= steps; p *= 10) {
    out.push_back(p);
    if (3 * p <= steps) out.push_back(3 * p);
    if (p > steps / 10) break;
  }
  if (out.empty() || out.back() != steps) out.push_back(steps);
  return out;
}

StatsReport random_rotor_range(std::int64_t steps, std::uint64_t seed, const std::vector<std::int64_t>& checkpoints) {
  if (steps < 0) throw std::invalid_argument("random_rotor_range: negative step count");
  const RotorMechanism mech = RotorMechanism::clockwise();
  const RotorInit init = RotorInit::random(seed);
  std::unordered_map<Point, std::uint8_t, PointHash> rotors;
  Point pos(2);
  rotors.emplace(pos, initial_rotor(init, pos));

  StatsReport rep("random rotor range seed=" + std::to_string(seed));
  std::vector<double> xs, ys;
  std::size_t next_cp = 0;
  auto record = [&](std::int64_t t) {
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == t) {
      const auto range = static_cast<double>(rotors.size());
      rep.add("range_" + std::to_string(t), range);
      if (t >= 10000) {
        xs.push_back(static_cast<double>(t));
        ys.push_back(range);
      }
      ++next_cp;
    }
  };
  record(0);
  for (std::int64_t t = 1; t <= steps; ++t) {
    auto it = rotors.find(pos);
    const std::uint8_t dir = mech.next(it->second);
    it->second = dir;
    pos[dir / 2] += dir % 2 == 0 ? 1 : -1;
    if (!rotors.contains(pos)) rotors.emplace(pos, initial_rotor(init, pos));
    record(t);
  }
  rep.add("range", static_cast<double>(rotors.size()));
  if (xs.size() >= 2) {
    rep.add("exponent", loglog_slope(xs, ys));
    rep.note("exploratory: predicted growth exponent 2/3, not asserted");
  }
  return rep;
}

}  // namespace lapgrowth
