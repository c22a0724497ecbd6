#pragma once

// Internal DLA: particles released one at a time from the origin perform
// simple random walk until they reach an unoccupied site, where they stay.

#include <cstdint>

#include "lapgrowth/lattice.hpp"
#include "lapgrowth/rng.hpp"
#include "lapgrowth/stats.hpp"

namespace lapgrowth {

/// Walks longer than this (summed over a cluster) throw ConvergenceError.
inline constexpr std::int64_t kIdlaStepCap = 10'000'000'000;

/// Window radius ceil(2 (n / omega_d)^(1/d)) + 2.
int idla_window(std::int64_t n, int d);

/// Cluster of n sites with arrival indices 1..n. Throws WindowOverflow if a
/// walker reaches the window ring.
Cluster idla_aggregate(std::int64_t n, RngStream& rng, int d = 2);

/// reps independent clusters, replica i driven by RngStream(base_seed).split(i).
/// Reports mean/max of r_out - r, r - r_in and of (r_out - r_in) / log r.
StatsReport idla_fluctuations(std::int64_t n, int reps, std::uint64_t base_seed, int d = 2);

}  // namespace lapgrowth
