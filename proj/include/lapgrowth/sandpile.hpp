#pragma once

// Abelian sandpile on a box of Z^d. A site is unstable when it holds at
// least 2d grains; toppling sends one grain to each neighbour.

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "lapgrowth/lattice.hpp"
#include "lapgrowth/stats.hpp"

namespace lapgrowth {

struct SandpileField {
  Grid<std::int32_t> heights;

  /// Every site holds at most 2d - 1 grains.
  bool is_stable() const;
  std::int64_t total() const;
};

struct Odometer {
  Grid<std::uint64_t> counts;
};

enum class TopplePolicy {
  kFifo,    // work queue, first in first out (batch topplings per visit)
  kLifo,    // work stack
  kRandom,  // one toppling of a uniformly chosen unstable site at a time
  kSweep,   // raster sweeps until a sweep topples nothing
};

enum class BoundaryMode {
  kStrict,     // the outer ring may receive grains but never topple; an unstable ring site throws WindowOverflow
  kAbsorbing,  // the outer ring is a sink: grains reaching it disappear
};

struct Stabilization {
  SandpileField field;
  Odometer odometer;
  /// Grains swallowed by an absorbing ring (0 in strict mode).
  std::int64_t absorbed = 0;
};

/// Stabilizes s. The result does not depend on the policy (abelian
/// property); `seed` only drives kRandom.
Stabilization stabilize(const SandpileField& s, TopplePolicy policy = TopplePolicy::kFifo,
                        std::uint64_t seed = 0, BoundaryMode mode = BoundaryMode::kStrict);

/// Checks result = s + laplacian(u) exactly at every site of the window
/// (u is zero outside it). Absorbing runs are checked off the ring only.
bool check_stabilization_identity(const SandpileField& s, const Stabilization& r,
                                  BoundaryMode mode = BoundaryMode::kStrict);

struct LeastActionReport {
  /// s + laplacian(w) <= 2d - 1 everywhere (w zero outside the window).
  bool satisfies_lap = false;
  std::optional<Point> lap_violation;
  /// w >= u pointwise; only evaluated when satisfies_lap.
  bool dominates = false;
  std::optional<Point> dominance_violation;
};

/// Tests the least-action inequality for a candidate toppling function w and,
/// when it holds, whether w dominates the true odometer.
LeastActionReport verify_least_action(const SandpileField& s, const Grid<std::uint64_t>& w);

struct SingleSource {
  SandpileField field;
  Odometer odometer;
  Cluster cluster;  // sites that toppled or hold grains
};

/// Margin added to the volume radius when preallocating single-source windows.
inline constexpr int kSandpileWindowMargin = 3;

/// n grains at the origin of Z^d, stabilized in a window of radius
/// ceil((n / omega_d)^(1/d)) + kSandpileWindowMargin.
SingleSource single_source(std::int64_t n, int d, TopplePolicy policy = TopplePolicy::kFifo);

using Rational = boost::rational<std::int64_t>;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// s_A = laplacian(ceil(q_A)) with q_A(x) = x^T A x / 2, in exact arithmetic.
SandpileField quadratic_sandpile(const RationalMatrix& A, const Point& lo, const Point& hi);

/// For each box radius L, stabilizes s_A (plus `extra_at_origin` grains) on
/// [-L, L]^d with an absorbing boundary and records u_L(0). The "bounded"
/// verdict (last two values equal) is a heuristic and labelled as such.
StatsReport local_stabilization_probe(const RationalMatrix& A, const std::vector<int>& sizes,
                                      std::int32_t extra_at_origin = 0);

}  // namespace lapgrowth
