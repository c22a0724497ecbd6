#pragma once

// Rotor walks on Z^d. Direction k is the k-th neighbour of neighbors():
// +e_1, -e_1, +e_2, -e_2, ... In d = 2 that is E=0, W=1, N=2, S=3.
// A walker first advances the rotor at its site, then moves along it.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lapgrowth/lattice.hpp"
#include "lapgrowth/stats.hpp"

namespace lapgrowth {

inline constexpr std::uint8_t kEast = 0, kWest = 1, kNorth = 2, kSouth = 3;

/// Cyclic service order of the 2d directions, the same at every site.
class RotorMechanism {
 public:
  RotorMechanism() = default;
  /// Throws std::invalid_argument unless `order` is a permutation of 0..2d-1.
  explicit RotorMechanism(std::vector<std::uint8_t> order);

  /// d = 2: North, East, South, West.
  static RotorMechanism clockwise();
  static RotorMechanism counterclockwise();
  /// Base order 0, 1, ..., 2d-1.
  static RotorMechanism standard(int d);

  int dim() const { return static_cast<int>(order_.size()) / 2; }
  const std::vector<std::uint8_t>& order() const { return order_; }
  std::uint8_t next(std::uint8_t dir) const { return next_[dir]; }

 private:
  std::vector<std::uint8_t> order_;
  std::array<std::uint8_t, 2 * kMaxDim> next_{};
};

struct RotorState {
  Grid<std::uint8_t> dirs;
  RotorMechanism mech;
};

/// Initial rotor setting: every rotor pointing one way, or i.i.d. uniform
/// directions drawn from a hash of (seed, site).
struct RotorInit {
  enum class Kind { kUniform, kRandom };
  Kind kind = Kind::kUniform;
  std::uint8_t dir = kNorth;
  std::uint64_t seed = 0;

  static RotorInit all(std::uint8_t d) { return {Kind::kUniform, d, 0}; }
  static RotorInit random(std::uint64_t seed) { return {Kind::kRandom, 0, seed}; }
  std::string describe() const;
};

/// Initial direction at x under `init`.
std::uint8_t initial_rotor(const RotorInit& init, const Point& x);

RotorState make_rotor_state(int d, int radius, const RotorMechanism& mech, const RotorInit& init);

/// Window radius for n walkers: r + 2 log(r + 2) + 4 with omega_d r^d = n.
int rotor_window(std::int64_t n, int d);

/// Advances the rotor at pos and returns the neighbour it now points to.
/// Throws WindowOverflow when pos is on the window ring.
Point rotor_step(RotorState& state, const Point& pos);

/// Exit counters N(x, dir).
struct EdgeFlow {
  Grid<std::array<std::uint64_t, 2 * kMaxDim>> exits;

  std::uint64_t operator()(const Point& x, int dir) const { return exits.at(x)[static_cast<std::size_t>(dir)]; }
};

struct RotorRun {
  Cluster cluster;                // R_n, with arrival order
  Grid<std::uint64_t> odometer;   // u(x) = number of exits from x
  RotorState state;               // final rotors
  EdgeFlow flow;
};

/// n walkers from the origin, one at a time, each walking until it finds an
/// unoccupied site. Only u is tracked during the walk; the exit counters follow
/// from u, the initial rotors and the mechanism (exits cycle through the order).
RotorRun rotor_aggregate(std::int64_t n, RotorState state);

/// rotor_aggregate in a window of radius rotor_window(n, d).
RotorRun rotor_run(std::int64_t n, int d, const RotorMechanism& mech, const RotorInit& init);

/// N(x, dir) for a site that started at rotor `initial` and emitted u walkers.
EdgeFlow edge_flow_from_odometer(const Grid<std::uint64_t>& u, const Grid<std::uint8_t>& initial,
                                 const RotorMechanism& mech);

/// Max over in-window edges of |u(x) - u(y) - 2d theta(x, y)| with
/// theta = N(x, y) - N(y, x); fails when above 4d - 2. Also checks
/// u = sum of exit counters and a per-site counter spread of at most 1.
StatsReport check_odometer_flow(const Grid<std::uint64_t>& u, const EdgeFlow& flow);

/// Net number of walkers entering the box [lo, hi] across its boundary.
std::int64_t net_inflow(const EdgeFlow& flow, const Point& lo, const Point& hi);

/// S_k u(x) is the mean of u over B(x, k). Reports max |(1/2d) laplacian(S_k u)(x) - 1|
/// over sites with B(x, k + 1) inside the cluster minus the origin, and the
/// max |laplacian(u)| off the origin, failing when it exceeds 8 d^2. With no
/// admissible sites the smoothing entry is 0 and a note says so.
StatsReport smoothed_laplacian(const Grid<std::uint64_t>& u, int k, const Cluster& cluster);

/// Exact integer-valued harmonic function on Z^d.
struct LatticeHarmonic {
  std::string name;
  std::function<std::int64_t(const Point&)> h;
};
/// x_i, x_i x_j (i < j), x_1^2 - x_j^2, and in d = 2 also Re z^3, Im z^3.
std::vector<LatticeHarmonic> lattice_harmonics(int d);

/// lhs = |h[R_n] - n h(0)|, rhs = sum_{x in R_n} sum_{y ~ x} |h(x) - h(y)|,
/// slack = rhs - lhs (exact integers). Fails when h is not harmonic on the
/// cluster or when slack < 0.
StatsReport harmonic_balance(const Cluster& c, const LatticeHarmonic& h);

/// For every `samples`-th boundary site z0 (evenly spread over the sorted
/// boundary) and each rho < |z0| in rho_list, density #(B(z0, rho) cap c) / rho^d.
/// Reports the minimum ("min_density") and how many pairs were admissible.
StatsReport tentacle_density(const Cluster& c, int samples, const std::vector<double>& rho_list);

/// For each n: r, r - r_in, r_out - r and (r_out - r_in) / log r (only for r > 1).
/// Reports max_normalized over the scan.
StatsReport fluctuation_scan(const std::vector<std::int64_t>& n_list, int d, const RotorMechanism& mech,
                             const RotorInit& init);

/// Single rotor walk from the origin of Z^2 with i.i.d. uniform initial rotors.
/// Records the number of distinct visited sites ("range_<n>") at each
/// checkpoint and the fitted log-log exponent over checkpoints >= 10^4.
StatsReport random_rotor_range(std::int64_t steps, std::uint64_t seed, const std::vector<std::int64_t>& checkpoints);

/// Checkpoints 10^k and 3 * 10^k up to steps, plus steps itself.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps);

}  // namespace lapgrowth
