#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "lapgrowth/errors.hpp"
#include "lapgrowth/rotor.hpp"

using namespace lapgrowth;

namespace {

// Reference walker: sparse rotors, exit counters recorded as they happen.
struct Reference {
  std::vector<Point> order;
  std::map<Point, std::uint64_t> u;
  std::map<Point, std::array<std::uint64_t, 2 * kMaxDim>> exits;
  std::map<Point, std::uint8_t> rotor;
};

Reference reference_walk(std::int64_t n, int d, const RotorMechanism& mech, const RotorInit& init) {
  Reference ref;
  std::map<Point, bool> occupied;
  for (std::int64_t j = 0; j < n; ++j) {
    Point x(d);
    while (occupied[x]) {
      auto it = ref.rotor.find(x);
      if (it == ref.rotor.end()) it = ref.rotor.emplace(x, initial_rotor(init, x)).first;
      it->second = mech.next(it->second);
      ++ref.u[x];
      ++ref.exits[x][it->second];
      x = neighbors(x)[it->second];
    }
    occupied[x] = true;
    ref.order.push_back(x);
  }
  return ref;
}

void compare_with_reference(std::int64_t n, int d, const RotorMechanism& mech, const RotorInit& init) {
  const RotorRun run = rotor_run(n, d, mech, init);
  const Reference ref = reference_walk(n, d, mech, init);
  REQUIRE(run.cluster.size() == ref.order.size());
  for (std::size_t k = 0; k < ref.order.size(); ++k) {
    const auto a = static_cast<std::size_t>(run.cluster.arrival()[k] - 1);
    CHECK(run.cluster.sites()[k] == ref.order[a]);
  }
  const Grid<std::uint64_t>& u = run.odometer;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Point x = u.point(k);
    const auto it = ref.u.find(x);
    CHECK(u[k] == (it == ref.u.end() ? 0 : it->second));
    const auto e = ref.exits.find(x);
    for (int dir = 0; dir < 2 * d; ++dir)
      CHECK(run.flow(x, dir) == (e == ref.exits.end() ? 0 : e->second[static_cast<std::size_t>(dir)]));
    const auto r = ref.rotor.find(x);
    CHECK(run.state.dirs[k] == (r == ref.rotor.end() ? initial_rotor(init, x) : r->second));
  }
}

}  // namespace

TEST_CASE("mechanisms") {
  CHECK(RotorMechanism::clockwise().order() == std::vector<std::uint8_t>{kNorth, kEast, kSouth, kWest});
  CHECK(RotorMechanism::clockwise().next(kWest) == kNorth);
  CHECK(RotorMechanism::counterclockwise().next(kNorth) == kWest);
  CHECK(RotorMechanism::standard(3).next(5) == 0);
  CHECK_THROWS_AS(RotorMechanism({0, 1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(RotorMechanism({0, 1, 2}), std::invalid_argument);
}

TEST_CASE("first five clusters from all-north clockwise rotors") {
  const RotorRun run = rotor_run(5, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  const std::vector<Point> expect{{0, 0}, {1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (std::size_t k = 0; k < 5; ++k) {
    const auto a = static_cast<std::size_t>(run.cluster.arrival()[k] - 1);
    CHECK(run.cluster.sites()[k] == expect[a]);
  }
  CHECK(run.odometer.at(Point{0, 0}) == 4);
  CHECK(run.state.dirs.at(Point{0, 0}) == kNorth);
}

TEST_CASE("aggregation matches a reference walker that records every exit") {
  compare_with_reference(300, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  compare_with_reference(300, 2, RotorMechanism::counterclockwise(), RotorInit::all(kEast));
  compare_with_reference(300, 2, RotorMechanism::clockwise(), RotorInit::random(11));
  compare_with_reference(200, 3, RotorMechanism::standard(3), RotorInit::random(5));
}

TEST_CASE("odometer flow bound and counter consistency") {
  for (int d : {2, 3}) {
    const auto mech = d == 2 ? RotorMechanism::clockwise() : RotorMechanism::standard(d);
    for (const auto& init : {RotorInit::all(0), RotorInit::random(3)}) {
      const RotorRun run = rotor_run(2000, d, mech, init);
      const StatsReport rep = check_odometer_flow(run.odometer, run.flow);
      CHECK(rep.passed());
      CHECK(rep.get("max_flow_defect") <= 4 * d - 2);
      CHECK(rep.get("max_counter_spread") <= 1);
    }
  }
}

TEST_CASE("net inflow into a box counts the walkers that settled there") {
  const RotorRun run = rotor_run(1000, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  const Point lo{-3, -4}, hi{5, 2};
  std::int64_t settled = 0;
  for (const auto& p : run.cluster.sites())
    if (p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1]) ++settled;
  // n walkers start at the origin, inside the box
  CHECK(net_inflow(run.flow, lo, hi) + 1000 == settled);
}

TEST_CASE("harmonic balance holds with non-negative slack") {
  for (const auto& init : {RotorInit::all(kNorth), RotorInit::all(kEast), RotorInit::random(9)}) {
    const RotorRun run = rotor_run(1000, 2, RotorMechanism::clockwise(), init);
    const auto hs = lattice_harmonics(2);
    CHECK(hs.size() == 6);
    for (const auto& h : hs) {
      const StatsReport rep = harmonic_balance(run.cluster, h);
      CHECK(rep.passed());
      CHECK(rep.get("slack") >= 0);
    }
  }
}

TEST_CASE("lattice harmonics have zero discrete laplacian") {
  for (int d : {2, 3})
    for (const auto& h : lattice_harmonics(d))
      for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
          Point x(d);
          x[0] = a;
          x[1] = b;
          std::int64_t lap = -2 * d * h.h(x);
          for (const auto& y : neighbors(x)) lap += h.h(y);
          CHECK(lap == 0);
        }
}

TEST_CASE("smoothed laplacian") {
  const RotorRun run = rotor_run(20000, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  const StatsReport rep = smoothed_laplacian(run.odometer, 4, run.cluster);
  CHECK(rep.passed());
  CHECK(rep.get("admissible_sites") > 0);
  CHECK(rep.get("max_abs_laplacian_off_origin") <= 32);
  const RotorRun tiny = rotor_run(5, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  const StatsReport vac = smoothed_laplacian(tiny.odometer, 4, tiny.cluster);
  CHECK(vac.get("admissible_sites") == 0);
  CHECK(vac.get("max_smoothed_deviation") == 0);
}

TEST_CASE("random initial rotors are a deterministic, roughly uniform hash") {
  std::array<double, 4> counts{};
  for (int a = -50; a < 50; ++a)
    for (int b = -50; b < 50; ++b) {
      const Point x{a, b};
      CHECK(initial_rotor(RotorInit::random(77), x) == initial_rotor(RotorInit::random(77), x));
      counts[initial_rotor(RotorInit::random(77), x)] += 1;
    }
  double chi2 = 0;
  for (double c : counts) chi2 += (c - 2500) * (c - 2500) / 2500;
  CHECK(boost::math::cdf(boost::math::complement(boost::math::chi_squared(3), chi2)) > 1e-3);
  int differ = 0;
  for (int a = 0; a < 100; ++a)
    differ += initial_rotor(RotorInit::random(1), Point{a, 0}) != initial_rotor(RotorInit::random(2), Point{a, 0});
  CHECK(differ > 50);
  const RotorRun r1 = rotor_run(3000, 2, RotorMechanism::clockwise(), RotorInit::random(4));
  const RotorRun r2 = rotor_run(3000, 2, RotorMechanism::clockwise(), RotorInit::random(4));
  CHECK(r1.odometer == r2.odometer);
  CHECK(r1.state.dirs == r2.state.dirs);
}

TEST_CASE("window overflow") {
  RotorState st = make_rotor_state(2, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  CHECK_THROWS_AS(rotor_aggregate(100, st), WindowOverflow);
}

TEST_CASE("rotor cluster is close to a disc") {
  const StatsReport rep = fluctuation_scan({1000, 10000}, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  CHECK(rep.get("max_normalized") < 1.0);
  const RotorRun run = rotor_run(5000, 2, RotorMechanism::clockwise(), RotorInit::random(2));
  const StatsReport t = tentacle_density(run.cluster, 20, {2, 4, 8});
  CHECK(t.get("pairs") > 0);
  CHECK(t.get("min_density") > 0.5);
}

TEST_CASE("random rotor walk range") {
  const auto cps = geometric_checkpoints(100000);
  CHECK(cps.front() == 1);
  CHECK(cps.back() == 100000);
  const StatsReport rep = random_rotor_range(100000, 3, cps);
  CHECK(rep.has("exponent"));
  CHECK(rep.get("range_100000") <= 100000);
  CHECK(rep.get("range_100000") >= rep.get("range_10000"));
}
