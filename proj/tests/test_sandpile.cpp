#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "lapgrowth/errors.hpp"
#include "lapgrowth/rng.hpp"
#include "lapgrowth/sandpile.hpp"

using namespace lapgrowth;

namespace {

constexpr TopplePolicy kPolicies[] = {TopplePolicy::kFifo, TopplePolicy::kLifo, TopplePolicy::kRandom,
                                      TopplePolicy::kSweep};

// Independent oracle: sparse map, one toppling at a time, always the
// lexicographically smallest unstable site. Unbounded lattice.
struct MapPile {
  std::map<Point, long> h;
  std::map<Point, long> u;
};

MapPile brute_stabilize(std::map<Point, long> h, int d) {
  MapPile out;
  for (;;) {
    auto it = std::find_if(h.begin(), h.end(), [&](const auto& kv) { return kv.second >= 2 * d; });
    if (it == h.end()) break;
    const Point x = it->first;
    it->second -= 2 * d;
    ++out.u[x];
    for (const Point& y : neighbors(x)) ++h[y];
  }
  out.h = std::move(h);
  return out;
}

SandpileField point_field(int d, int radius, std::int32_t n) {
  SandpileField f{Grid<std::int32_t>::centered(d, radius, 0)};
  f.heights.at(Point(d)) = n;
  return f;
}

void check_against_oracle(const SandpileField& start, const Stabilization& r) {
  std::map<Point, long> h;
  for (std::size_t k = 0; k < start.heights.size(); ++k)
    if (start.heights[k]) h[start.heights.point(k)] = start.heights[k];
  const MapPile want = brute_stabilize(h, start.heights.dim());
  for (std::size_t k = 0; k < r.field.heights.size(); ++k) {
    const Point x = r.field.heights.point(k);
    const auto hv = want.h.find(x);
    const auto uv = want.u.find(x);
    CHECK(r.field.heights[k] == (hv == want.h.end() ? 0 : hv->second));
    CHECK(r.odometer.counts[k] == static_cast<std::uint64_t>(uv == want.u.end() ? 0 : uv->second));
  }
  for (const auto& [x, v] : want.h)
    if (v) CHECK(r.field.heights.contains(x));
}

}  // namespace

TEST_CASE("sixteen grains at the origin match the brute-force oracle") {
  const SandpileField s = point_field(2, 6, 16);
  for (TopplePolicy p : kPolicies) check_against_oracle(s, stabilize(s, p, 3));
  const Stabilization r = stabilize(s);
  CHECK(r.field.total() == 16);
  CHECK(r.field.is_stable());
}

TEST_CASE("one hundred grains match the oracle, d = 2 and d = 3") {
  check_against_oracle(point_field(2, 9, 100), stabilize(point_field(2, 9, 100), TopplePolicy::kLifo));
  check_against_oracle(point_field(3, 5, 100), stabilize(point_field(3, 5, 100), TopplePolicy::kSweep));
}

TEST_CASE("four grains make a plus shape") {
  const SingleSource s = single_source(4, 2);
  const auto& h = s.field.heights;
  CHECK(h.at(Point{0, 0}) == 0);
  for (const Point& y : neighbors(Point{0, 0})) CHECK(h.at(y) == 1);
  CHECK(s.odometer.counts.at(Point{0, 0}) == 1);
  CHECK(s.cluster.size() == 5);
}

TEST_CASE("abelian property on random piles") {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    SandpileField s{Grid<std::int32_t>::centered(2, 8, 0)};
    for (int x = -4; x <= 4; ++x)
      for (int y = -4; y <= 4; ++y) s.heights.at(Point{x, y}) = static_cast<std::int32_t>(rng.below(7));
    const Stabilization ref = stabilize(s, TopplePolicy::kFifo);
    CHECK(check_stabilization_identity(s, ref));
    for (TopplePolicy p : kPolicies) {
      const Stabilization r = stabilize(s, p, static_cast<std::uint64_t>(trial));
      CHECK(r.field.heights == ref.field.heights);
      CHECK(r.odometer.counts == ref.odometer.counts);
    }
  }
}

TEST_CASE("strict windows overflow, absorbing windows lose grains") {
  const SandpileField s = point_field(2, 3, 200);
  CHECK_THROWS_AS(stabilize(s), WindowOverflow);
  const Stabilization r = stabilize(s, TopplePolicy::kFifo, 0, BoundaryMode::kAbsorbing);
  CHECK(r.absorbed > 0);
  CHECK(r.field.total() + r.absorbed == 200);
  CHECK(check_stabilization_identity(s, r, BoundaryMode::kAbsorbing));
  // negative heights on a finite set are allowed
  SandpileField neg = point_field(2, 4, 8);
  neg.heights.at(Point{1, 0}) = -3;
  const Stabilization rn = stabilize(neg);
  CHECK(check_stabilization_identity(neg, rn));
  CHECK(rn.field.is_stable());
}

TEST_CASE("three grains are already stable") {
  const SandpileField s = point_field(2, 2, 3);
  const Stabilization r = stabilize(s);
  CHECK(r.field.heights == s.heights);
  for (auto v : r.odometer.counts.values()) CHECK(v == 0);
}

TEST_CASE("least action principle, exhaustively on a small window") {
  // s on [-2, 2]^2; candidates w on the inner 3x3 with values 0..2.
  SandpileField s{Grid<std::int32_t>::centered(2, 2, 0)};
  s.heights.at(Point{0, 0}) = 9;
  s.heights.at(Point{1, 0}) = 3;
  s.heights.at(Point{0, -1}) = 2;
  const Stabilization r = stabilize(s);
  const auto& u = r.odometer.counts;
  int admissible = 0;
  for (int code = 0; code < 19683; ++code) {
    Grid<std::uint64_t> w(s.heights.lo(), s.heights.hi(), 0);
    int c = code;
    for (int x = -1; x <= 1; ++x)
      for (int y = -1; y <= 1; ++y) {
        w.at(Point{x, y}) = static_cast<std::uint64_t>(c % 3);
        c /= 3;
      }
    // direct evaluation of s + laplacian(w) <= 3
    bool lap = true;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const Point x = w.point(k);
      long v = s.heights[k] - 4 * static_cast<long>(w[k]);
      for (const Point& y : neighbors(x)) v += static_cast<long>(w.value_or(y, 0));
      lap = lap && v <= 3;
    }
    const LeastActionReport rep = verify_least_action(s, w);
    CHECK(rep.satisfies_lap == lap);
    if (lap) {
      ++admissible;
      CHECK(rep.dominates);
      for (std::size_t k = 0; k < w.size(); ++k) CHECK(w[k] >= u[k]);
    }
  }
  CHECK(admissible > 0);
  CHECK(verify_least_action(s, u).satisfies_lap);
}

TEST_CASE("s_A for A = I matches laplacian of ceil(|x|^2 / 2)") {
  const RationalMatrix I{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  const SandpileField s = quadratic_sandpile(I, Point{-3, -3}, Point{3, 3});
  auto q = [](int x, int y) { return (x * x + y * y + 1) / 2; };  // ceil of a half-integer
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) {
      const int want = q(x + 1, y) + q(x - 1, y) + q(x, y + 1) + q(x, y - 1) - 4 * q(x, y);
      CHECK(s.heights.at(Point{x, y}) == want);
    }
  // q_A for A = 0 gives the empty pile
  const RationalMatrix Z{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
  CHECK(quadratic_sandpile(Z, Point{-2, -2}, Point{2, 2}).total() == 0);
}

TEST_CASE("local stabilization probe is labelled heuristic") {
  const RationalMatrix A{{Rational(1, 2), Rational(0)}, {Rational(0), Rational(1, 2)}};
  const StatsReport rep = local_stabilization_probe(A, {4, 8, 12});
  CHECK(rep.has("u0_L4"));
  CHECK(rep.has("u0_L12"));
  bool heuristic = false;
  for (const auto& n : rep.notes()) heuristic = heuristic || n.find("HEURISTIC") != std::string::npos;
  CHECK(heuristic);
}

TEST_CASE("single source is symmetric and conserves mass") {
  const SingleSource s = single_source(5000, 2);
  CHECK(s.field.total() == 5000);
  CHECK(s.field.is_stable());
  const auto& h = s.field.heights;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Point x = h.point(k);
    CHECK(h[k] == h.at(Point{-x[0], x[1]}));
    CHECK(h[k] == h.at(Point{x[1], x[0]}));
  }
  const SingleSource s3 = single_source(300, 3);
  CHECK(s3.field.total() == 300);
  CHECK(s3.field.heights.at(Point{1, 0, 0}) == s3.field.heights.at(Point{0, 0, -1}));
}
