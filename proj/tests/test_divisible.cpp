#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "lapgrowth/divisible.hpp"
#include "lapgrowth/errors.hpp"

using namespace lapgrowth;

namespace {

Grid<double> point_mass(double m, int d, int radius) {
  Grid<double> s = Grid<double>::centered(d, radius, 0.0);
  s.at(Point(d)) = m;
  return s;
}

// Independent oracle: simultaneous (Jacobi) toppling of every excess.
Grid<double> jacobi_odometer(const Grid<double>& sigma0, double tol) {
  Grid<double> s = sigma0, u(sigma0.lo(), sigma0.hi(), 0.0);
  const int two_d = 2 * sigma0.dim();
  for (;;) {
    Grid<double> next = s;
    double worst = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double ex = s[k] - 1;
      if (ex <= 0) continue;
      worst = std::max(worst, ex);
      const Point x = s.point(k);
      REQUIRE_FALSE(s.on_ring(x));
      next[k] -= ex;
      u[k] += ex;
      for (const Point& y : neighbors(x)) next.at(y) += ex / two_d;
    }
    s = std::move(next);
    if (worst < tol) return u;
  }
}

const GreenTable& green() {
  static const GreenTable g = green_exact(2, 40);
  return g;
}

}  // namespace

TEST_CASE("small exact cases") {
  const DivisibleResult one = divisible_stabilize(point_mass(1, 2, 3), 1e-12);
  for (auto v : one.odometer.values()) CHECK(v == 0);

  const DivisibleResult two = divisible_stabilize(point_mass(2, 2, 3), 1e-12);
  CHECK(two.odometer.at(Point{0, 0}) == doctest::Approx(1.0));
  CHECK(two.mass.at(Point{1, 0}) == doctest::Approx(0.25));
  CHECK(two.mass.at(Point{0, 0}) == doctest::Approx(1.0));

  const DivisibleResult five = divisible_stabilize(point_mass(5, 2, 3), 1e-12);
  CHECK(five.odometer.at(Point{0, 0}) == doctest::Approx(4.0));
  for (const Point& y : neighbors(Point{0, 0})) CHECK(five.mass.at(y) == doctest::Approx(1.0));
  CHECK(occupied_sites(five.mass, 1e-12).size() == 5);
}

TEST_CASE("conservation, stability and the odometer identity") {
  const double m = 300, tol = default_divisible_tolerance(m);
  const DivisibleResult r = divisible_stabilize(point_mass(m, 2, point_source_window(m, 2)), tol);
  CHECK(r.max_excess < tol);
  CHECK(r.mass_defect <= 1e-9 * m);
  CHECK(r.identity_defect <= 1e-9 * m);
  for (auto v : r.mass.values()) CHECK(v <= 1 + tol);
  for (auto v : r.odometer.values()) CHECK(v >= 0);
}

TEST_CASE("odometer agrees with an independent Jacobi solver and across sweep orders") {
  const double m = 200, tol = default_divisible_tolerance(m);
  const Grid<double> s0 = point_mass(m, 2, point_source_window(m, 2));
  const double r = radius_for_volume(m, 2);
  // |difference| of two tol-stable solutions is bounded by tol (r + 2)^2
  // (maximum principle on the occupied region).
  const double bound = tol * (r + 2) * (r + 2);
  const Grid<double> oracle = jacobi_odometer(s0, tol);
  const DivisibleResult raster = divisible_stabilize(s0, tol);
  const DivisibleResult checker = divisible_stabilize(s0, tol, {SweepOrder::kCheckerboard, 1});
  double d1 = 0, d2 = 0;
  for (std::size_t k = 0; k < s0.size(); ++k) {
    d1 = std::max(d1, std::abs(raster.odometer[k] - oracle[k]));
    d2 = std::max(d2, std::abs(checker.odometer[k] - raster.odometer[k]));
  }
  CHECK(d1 <= bound);
  CHECK(d2 <= bound);
}

TEST_CASE("checkerboard results do not depend on the thread count") {
  const double m = 500, tol = default_divisible_tolerance(m);
  const Grid<double> s0 = point_mass(m, 2, point_source_window(m, 2));
  const DivisibleResult a = divisible_stabilize(s0, tol, {SweepOrder::kCheckerboard, 1});
  const DivisibleResult b = divisible_stabilize(s0, tol, {SweepOrder::kCheckerboard, 3});
  CHECK(a.odometer == b.odometer);
  CHECK(a.mass == b.mass);
  CHECK(a.sweeps == b.sweeps);
}

TEST_CASE("bad input and small windows") {
  CHECK_THROWS_AS(divisible_stabilize(point_mass(100, 2, 3), 1e-8), WindowOverflow);
  CHECK_THROWS_AS(divisible_stabilize(point_mass(-1, 2, 3), 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(divisible_stabilize(point_mass(NAN, 2, 3), 1e-8), std::invalid_argument);
}

TEST_CASE("three-dimensional point source is symmetric") {
  const double m = 200, tol = default_divisible_tolerance(m);
  const DivisibleResult r = divisible_stabilize(point_mass(m, 3, point_source_window(m, 3)), tol);
  CHECK(r.mass_defect <= 1e-9 * m);
  CHECK(r.odometer.at(Point{1, 2, 0}) == doctest::Approx(r.odometer.at(Point{0, -1, 2})).epsilon(1e-6));
}

TEST_CASE("point source shape report") {
  const StatsReport rep = point_source_shape(400, 2, default_divisible_tolerance(400), &green());
  CHECK(rep.passed());
  CHECK(rep.get("r") == doctest::Approx(std::sqrt(400 / M_PI)));
  CHECK(rep.get("c_in") <= 2.5);
  CHECK(rep.get("c_out") <= 2.5);
  CHECK(rep.get("odometer_deviation") < 2);
}

TEST_CASE("obstacle solver: superharmonic obstacles are their own majorant") {
  Grid<double> gamma = Grid<double>::centered(2, 6, 0.0);
  for (std::size_t k = 0; k < gamma.size(); ++k) gamma[k] = -static_cast<double>(gamma.point(k).norm2());
  const ObstacleResult r = obstacle_solve(gamma, 1e-10);
  for (std::size_t k = 0; k < gamma.size(); ++k) CHECK(r.s[k] == doctest::Approx(gamma[k]));
  CHECK(r.complementarity_gap <= 1e-10);
}

TEST_CASE("obstacle and toppling odometers agree for a point source") {
  const StatsReport rep = obstacle_toppling_gap(100, green(), default_divisible_tolerance(100));
  CHECK(rep.get("gap_over_m") <= 1e-6);
}

TEST_CASE("harmonic test polynomials are harmonic") {
  const auto hs = harmonic_polynomials(2);
  CHECK(hs.size() == 7);
  const double h = 1e-3;
  for (const auto& p : hs) {
    const double x[2] = {0.3, -0.7};
    double lap = -4 * p.eval(x);
    for (int i = 0; i < 2; ++i)
      for (int s : {-1, 1}) {
        double y[2] = {x[0], x[1]};
        y[i] += s * h;
        lap += p.eval(y);
      }
    CHECK(std::abs(lap / (h * h)) < 1e-4);
  }
  CHECK(harmonic_polynomials(3).size() >= 6);
}

TEST_CASE("multi-source run conserves mass and satisfies quadrature for constants") {
  const std::vector<Source> src{{Point{-6, 0}, 150}, {Point{6, 0}, 150}};
  const MultiSourceResult r = multi_source(src, 1e-8);
  double total = 0;
  for (auto v : r.run.mass.values()) total += v;
  CHECK(total == doctest::Approx(300));
  CHECK(r.cluster.contains(Point{0, 0}));
  const StatsReport q = quadrature_check(r.cluster, {Point{-6, 0}, Point{6, 0}}, {150, 150}, 1.0);
  CHECK(q.has("one_rel"));
  // odd polynomials vanish by symmetry on both sides
  CHECK(std::abs(q.get("x1_lhs")) <= 1e-9 * 300);
  CHECK(q.get("x1_rhs") == doctest::Approx(0));
}

TEST_CASE("two-source boundary against the quartic at a coarse scale") {
  const double err = two_source_boundary_error(1.0, 16);
  CHECK(err > 0);
  CHECK(err < 0.2);
}
