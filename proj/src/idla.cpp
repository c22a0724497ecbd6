#include "lapgrowth/idla.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lapgrowth/errors.hpp"

namespace lapgrowth {

int idla_window(std::int64_t n, int d) {
  return static_cast<int>(std::ceil(2 * radius_for_volume(static_cast<double>(n), d))) + 2;
}

Cluster idla_aggregate(std::int64_t n, RngStream& rng, int d) {
  if (n < 1) throw std::invalid_argument("idla_aggregate: n must be >= 1");
  const Grid<std::uint8_t> shape = Grid<std::uint8_t>::centered(d, idla_window(n, d), 0);
  const auto offs = shape.neighbor_offsets();
  const auto two_d = static_cast<unsigned>(offs.size());
  // bit 0: occupied, bit 1: window ring
  std::vector<std::uint8_t> site = shape.ring_mask();
  for (auto& b : site) b = static_cast<std::uint8_t>(b << 1);
  const auto origin = static_cast<std::ptrdiff_t>(shape.index(Point(d)));

  std::vector<Point> sites;
  std::vector<std::int64_t> arrival;
  sites.reserve(static_cast<std::size_t>(n));
  arrival.reserve(static_cast<std::size_t>(n));
  std::int64_t steps = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    std::ptrdiff_t k = origin;
    while (site[static_cast<std::size_t>(k)] & 1) {
      if (site[static_cast<std::size_t>(k)] & 2)
        throw WindowOverflow("IDLA walker reached " + shape.point(static_cast<std::size_t>(k)).to_string());
      k += offs[rng.direction(two_d)];
      if (++steps > kIdlaStepCap) throw ConvergenceError("IDLA step cap exceeded");
    }
    site[static_cast<std::size_t>(k)] |= 1;
    sites.push_back(shape.point(static_cast<std::size_t>(k)));
    arrival.push_back(j);
  }
  return Cluster(std::move(sites), std::move(arrival));
}

StatsReport idla_fluctuations(std::int64_t n, int reps, std::uint64_t base_seed, int d) {
  if (reps < 1) throw std::invalid_argument("idla_fluctuations: reps must be >= 1");
  const RngStream base(base_seed);
  const double r = radius_for_volume(static_cast<double>(n), d);
  const double logr = std::log(r);
  double sum_out = 0, sum_in = 0, sum_norm = 0, max_out = 0, max_in = 0, max_norm = 0, sum_width = 0;
  for (int i = 0; i < reps; ++i) {
    RngStream rng = base.split(static_cast<std::uint64_t>(i));
    const Radii radii = inradius_outradius(idla_aggregate(n, rng, d), Point(d));
    const double out = radii.outer - r, in = r - radii.inner;
    const double norm = r > 1 ? (radii.outer - radii.inner) / logr : 0.0;
    sum_out += out;
    sum_in += in;
    sum_norm += norm;
    sum_width += radii.outer - radii.inner;
    max_out = std::max(max_out, out);
    max_in = std::max(max_in, in);
    max_norm = std::max(max_norm, norm);
  }
  StatsReport rep("IDLA fluctuations n=" + std::to_string(n));
  rep.add("r", r);
  rep.add("mean_outer_gap", sum_out / reps, 0, reps);
  rep.add("max_outer_gap", max_out, 0, reps);
  rep.add("mean_inner_gap", sum_in / reps, 0, reps);
  rep.add("max_inner_gap", max_in, 0, reps);
  rep.add("mean_width", sum_width / reps, 0, reps);
  rep.add("mean_normalized", sum_norm / reps, 0, reps);
  rep.add("max_normalized", max_norm, 0, reps);
  return rep;
}

}  // namespace lapgrowth
