// One PASS/FAIL line per acceptance criterion. Tolerances are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "lapgrowth/algebra.hpp"
#include "lapgrowth/cli.hpp"
#include "lapgrowth/divisible.hpp"
#include "lapgrowth/estimators.hpp"
#include "lapgrowth/green.hpp"
#include "lapgrowth/idla.hpp"
#include "lapgrowth/rotor.hpp"
#include "lapgrowth/sandpile.hpp"

using namespace lapgrowth;
namespace fs = std::filesystem;

namespace {

// First-run values plus 25%.
constexpr double kRotorNormalizedBound = 0.607;  // first run 0.4856
constexpr double kIdlaNormalizedBound = 1.74;    // first run 1.391

constexpr double kDivisibleGap = 2.5;
constexpr double kObstacleGapOverM = 1e-6;
constexpr double kQuarticDistance = 0.1;
constexpr double kQuadratureRel = 0.02;
constexpr double kZetaAllowance = 0.05;
constexpr double kHeightAllowance = 0.02;

std::int64_t disc_volume(int r) { return static_cast<std::int64_t>(std::floor(std::numbers::pi * r * r)); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("C%-2d %s  %s (%.1fs)%s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), secs, o.detail.str().c_str());
  std::fflush(stdout);
}

void c1_abelian(Outcome& o) {
  RngStream rng(20240101);
  const TopplePolicy policies[] = {TopplePolicy::kLifo, TopplePolicy::kRandom, TopplePolicy::kSweep};
  int piles = 0;
  for (int i = 0; i < 100; ++i) {
    const int side = 1 + static_cast<int>(rng.below(21));
    const auto mass = 1 + static_cast<std::int64_t>(rng.below(500));
    SandpileField s{Grid<std::int32_t>::centered(2, 32, 0)};
    const int lo = -(side / 2);
    for (std::int64_t g = 0; g < mass; ++g) {
      const int x = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(side)));
      const int y = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(side)));
      ++s.heights.at(Point{x, y});
    }
    const Stabilization ref = stabilize(s, TopplePolicy::kFifo);
    bool same = check_stabilization_identity(s, ref);
    for (auto p : policies) {
      const Stabilization r = stabilize(s, p, 1000 + static_cast<std::uint64_t>(i));
      same = same && r.field.heights == ref.field.heights && r.odometer.counts == ref.odometer.counts;
    }
    o.require(same, "pile " + std::to_string(i));
    piles += same;
  }
  o.detail << " identical=" << piles << "/100";
}

void c2_divisible_shape(Outcome& o) {
  for (double m : {400.0, 1600.0, 6400.0}) {
    const StatsReport rep = point_source_shape(m, 2, default_divisible_tolerance(m));
    const double cin = rep.get("c_in"), cout = rep.get("c_out");
    o.detail << " m=" << m << ": r-r_in=" << cin << " r_out-r=" << cout;
    o.require(cin <= kDivisibleGap && cout <= kDivisibleGap, "m=" + std::to_string(m));
  }
}

const GreenTable& green64() {
  static const GreenTable g = green_exact(2, 64);
  return g;
}

void c3_odometer(Outcome& o) {
  double first = 0, last = 0;
  for (double m : {1e2, 1e3, 1e4}) {
    const StatsReport rep = point_source_shape(m, 2, default_divisible_tolerance(m), &green64());
    const double dev = rep.get("odometer_deviation");
    o.detail << " m=" << m << ": " << dev;
    if (m == 1e2) first = dev;
    last = dev;
  }
  o.require(last <= 1.5 * first + 1, "deviation grows");
}

void c4_obstacle(Outcome& o) {
  for (double m : {100.0, 1000.0}) {
    const StatsReport rep = obstacle_toppling_gap(m, green64(), default_divisible_tolerance(m));
    const double g = rep.get("gap_over_m");
    o.detail << " m=" << m << ": gap/m=" << g;
    o.require(g <= kObstacleGapOverM, "m=" + std::to_string(m));
  }
}

void c5_flow(Outcome& o) {
  for (int d : {2, 3}) {
    const auto mech = d == 2 ? RotorMechanism::clockwise() : RotorMechanism::standard(d);
    const RotorRun run = rotor_run(10000, d, mech, RotorInit::all(0));
    const StatsReport rep = check_odometer_flow(run.odometer, run.flow);
    o.detail << " d=" << d << ": defect=" << rep.get("max_flow_defect") << "/" << 4 * d - 2;
    o.require(rep.passed() && rep.get("max_flow_defect") <= 4 * d - 2, "d=" + std::to_string(d));
  }
}

void c6_rotor_fluct(Outcome& o) {
  std::vector<std::int64_t> ns;
  for (int r : {16, 32, 64, 128, 256}) ns.push_back(disc_volume(r));
  const StatsReport rep = fluctuation_scan(ns, 2, RotorMechanism::clockwise(), RotorInit::all(kNorth));
  const double worst = rep.get("max_normalized");
  const double w64 = rep.get("width_n" + std::to_string(disc_volume(64)));
  const double w256 = rep.get("width_n" + std::to_string(disc_volume(256)));
  o.detail << " max (r_out-r_in)/log r=" << worst << " width64=" << w64 << " width256=" << w256;
  o.require(worst <= kRotorNormalizedBound, "normalized bound");
  o.require(w256 < 2 * w64, "width growth");
}

void c7_harmonic_balance(Outcome& o) {
  const RotorInit inits[] = {RotorInit::all(kNorth), RotorInit::all(kEast), RotorInit::random(17)};
  double min_slack = INFINITY;
  int checks = 0;
  for (std::int64_t n : {1000, 10000})
    for (const auto& init : inits) {
      const RotorRun run = rotor_run(n, 2, RotorMechanism::clockwise(), init);
      for (const auto& h : lattice_harmonics(2)) {
        const StatsReport rep = harmonic_balance(run.cluster, h);
        min_slack = std::min(min_slack, rep.get("slack"));
        o.require(rep.passed(), h.name + " n=" + std::to_string(n) + " " + init.describe());
        ++checks;
      }
    }
  o.detail << " checks=" << checks << " min slack=" << min_slack;
}

void c8_idla(Outcome& o) {
  const StatsReport a = idla_fluctuations(disc_volume(64), 20, 64);
  const StatsReport b = idla_fluctuations(disc_volume(128), 20, 128);
  const double worst = a.get("max_normalized");
  const double ratio = b.get("mean_width") / a.get("mean_width");
  o.detail << " max (r_out-r_in)/log r=" << worst << " mean width64=" << a.get("mean_width")
           << " width128=" << b.get("mean_width") << " ratio=" << ratio;
  o.require(worst <= kIdlaNormalizedBound, "normalized bound");
  o.require(ratio <= 1.8, "width ratio");
}

void c9_algebra(Outcome& o) {
  int graphs = 0, tables = 0;
  for (const auto& g : graph_library()) {
    const StatsReport ex = algebra_exactness(g);
    const StatsReport laws = check_group_laws(g);
    o.require(ex.passed(), "exactness " + g.name());
    o.require(laws.passed(), "group laws " + g.name());
    ++graphs;
    tables += laws.has("law_violations");
  }
  o.detail << " graphs=" << graphs << " full group tables=" << tables;
}

void c10_heights(Outcome& o) {
  const HeightEstimates h = sandpile_mc_heights(64, default_burnin(64), 100000, 10, 10);
  const auto target = height_targets();
  o.detail << " zeta=" << h.zeta.value << " (batch se " << h.zeta_batch_stderr << ")";
  o.require(std::abs(h.zeta.value - kZetaTarget) <= kZetaAllowance, "zeta");
  for (int i = 0; i < 4; ++i) {
    const auto k = static_cast<std::size_t>(i);
    o.detail << " p" << i << "=" << h.p[k].value;
    o.require(std::abs(h.p[k].value - target[k]) <= kHeightAllowance, "p" + std::to_string(i));
  }
}

void c11_xi(Outcome& o) {
  const EstimateResult xi = looping_constant(200, 100000, 11);
  const double allow = 3 * xi.stderr_ + 0.01;
  o.detail << " xi=" << xi.value << " se=" << xi.stderr_ << " allowance=" << allow;
  o.require(std::abs(xi.value - kXiTarget) <= allow, "xi");
}

void c12_unicycles(Outcome& o) {
  const UnicycleEstimates u = unicycle_estimators(wired_grid(64), 10000, 12);
  const double la = 3 * u.lambda.stderr_ + 0.5, ta = 3 * u.tau.stderr_ + 0.01;
  o.detail << " lambda=" << u.lambda.value << " (allow " << la << ") tau=" << u.tau.value << " (allow " << ta << ")";
  o.require(std::abs(u.lambda.value - kLambdaTarget) <= la, "lambda");
  o.require(std::abs(u.tau.value - kTauTarget) <= ta, "tau");
  int exact = 0;
  for (const auto& g : graph_library()) {
    if (g.edge_count() > kMaxBruteForceEdges) continue;
    const StatsReport rep = tilted_identity(g, 2000, 13);
    o.require(rep.passed(), "tilted identity " + g.name());
    ++exact;
  }
  o.detail << " tilted identity graphs=" << exact;
}

void c13_quadrature(Outcome& o) {
  const int r = 50;
  const double err = two_source_boundary_error(1.0, r);
  o.detail << " quartic distance=" << err;
  o.require(err <= kQuarticDistance, "quartic distance");
  const double m = std::floor(std::numbers::pi * r * r);
  const MultiSourceResult run = multi_source({{Point{-r, 0}, m}, {Point{r, 0}, m}}, default_divisible_tolerance(2 * m));
  const double w = m / (r * r);
  const StatsReport q = quadrature_check(run.cluster, {Point{-r, 0}, Point{r, 0}}, {w, w}, r);
  double worst = 0;
  for (const auto& h : harmonic_polynomials(2))
    if (h.degree <= 2) worst = std::max(worst, q.get(h.name + "_rel"));
  o.detail << " max quadrature rel error=" << worst;
  o.require(worst <= kQuadratureRel, "quadrature");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::map<std::string, std::uint64_t> hash_dir(const fs::path& dir) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    out[e.path().filename().string()] = fnv1a({std::istreambuf_iterator<char>(in), {}});
  }
  return out;
}

void c14_determinism(Outcome& o) {
  const std::vector<std::vector<std::string>> pipelines{
      {"simulate", "--model", "sandpile", "--n", "20000"},
      {"simulate", "--model", "divisible", "--m", "3000"},
      {"simulate", "--model", "rotor", "--n", "20000", "--init", "random", "--seed", "3"},
      {"simulate", "--model", "idla", "--n", "5000", "--seed", "4"},
      {"estimate", "--what", "all", "--grid", "16", "--samples", "3000", "--R", "30", "--seed", "5"},
      {"algebra", "--op", "identity", "--grid", "24"},
  };
  const fs::path base = fs::temp_directory_path() / "lapgrowth_acceptance";
  int files = 0;
  for (std::size_t i = 0; i < pipelines.size(); ++i) {
    std::map<std::string, std::uint64_t> hashes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = base / (std::to_string(i) + "_" + std::to_string(rep));
      fs::remove_all(dir);
      auto args = pipelines[i];
      args.insert(args.end(), {"--out", dir.string()});
      std::ostringstream out, err;
      const int code = cli_main(args, out, err);
      o.require(code == kExitOk, pipelines[i][0] + " " + pipelines[i][2] + " exit " + std::to_string(code));
      hashes[rep] = hash_dir(dir);
    }
    o.require(!hashes[0].empty() && hashes[0] == hashes[1], "pipeline " + std::to_string(i));
    files += static_cast<int>(hashes[0].size());
  }
  fs::remove_all(base);
  o.detail << " pipelines=" << pipelines.size() << " files compared=" << files;
}

}  // namespace

int main() {
  criterion(1, "abelian property, 100 piles x 4 policies", c1_abelian);
  criterion(2, "divisible sandpile shape", c2_divisible_shape);
  criterion(3, "divisible odometer estimate", c3_odometer);
  criterion(4, "obstacle / toppling odometers", c4_obstacle);
  criterion(5, "rotor odometer flow bound", c5_flow);
  criterion(6, "rotor aggregation fluctuations", c6_rotor_fluct);
  criterion(7, "rotor harmonic balance", c7_harmonic_balance);
  criterion(8, "IDLA fluctuations", c8_idla);
  criterion(9, "sandpile group exactness", c9_algebra);
  criterion(10, "zeta and height law on WiredGrid(64)", c10_heights);
  criterion(11, "looping constant xi", c11_xi);
  criterion(12, "lambda, tau and the tilted identity", c12_unicycles);
  criterion(13, "two-source quadrature domain", c13_quadrature);
  criterion(14, "determinism of seeded pipelines", c14_determinism);
  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
