#pragma once

// Divisible sandpile: real mass, a site with mass above 1 keeps 1 and splits
// the excess equally among its 2d neighbours. The odometer u(x) is the total
// mass emitted from x, so sigma_out = sigma_0 + (1/2d) laplacian(u).

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lapgrowth/green.hpp"
#include "lapgrowth/lattice.hpp"
#include "lapgrowth/stats.hpp"

namespace lapgrowth {

enum class SweepOrder {
  kRaster,        // forward raster, updates in place
  kCheckerboard,  // even sites then odd sites; each half-sweep is order free
};

struct DivisibleOptions {
  SweepOrder order = SweepOrder::kRaster;
  /// Worker threads for checkerboard half-sweeps (results do not depend on it).
  int threads = 1;
  std::int64_t max_sweeps = 50'000'000;
};

struct DivisibleResult {
  Grid<double> mass;
  Grid<double> odometer;
  double max_excess = 0;   // max(sigma - 1, 0) at exit, < tol
  std::int64_t sweeps = 0;
  double mass_defect = 0;  // |sum sigma_out - sum sigma_0|
  /// max |sigma_out - sigma_0 - (1/2d) laplacian(u)| off the ring
  double identity_defect = 0;
};

/// Sweeps until every site holds at most 1 + tol. The outer ring of the window
/// never topples; a ring site that would need to throws WindowOverflow.
/// Negative or non-finite mass throws std::invalid_argument.
DivisibleResult divisible_stabilize(const Grid<double>& sigma0, double tol, const DivisibleOptions& opt = {});

/// Default stopping tolerance for total mass m.
inline double default_divisible_tolerance(double m) { return 1e-10 * m; }

/// Sites with sigma >= 1 - tol.
Cluster occupied_sites(const Grid<double>& mass, double tol);

/// Window radius used for a point source of mass m in Z^d.
int point_source_window(double m, int d);

/// m grains at the origin. Reports r (omega_d r^d = m), r_in, r_out,
/// c_in = r - r_in, c_out = r_out - r and, when a Green table is supplied,
/// odometer_deviation = max over the occupied set of
///   |u(x) - (m g(x) + |x|^2 - m G(r) - r^2)|,
/// with G the radial asymptotic form (g is not defined off the lattice).
StatsReport point_source_shape(double m, int d, double tol, const GreenTable* green = nullptr);

/// gamma(x) = -|x|^2 - m g(x) on [-radius, radius]^d.
Grid<double> point_source_obstacle(double m, const GreenTable& green, int radius);

struct ObstacleResult {
  Grid<double> s;
  std::int64_t sweeps = 0;
  double max_laplacian = 0;        // max over interior sites of laplacian(s)
  double complementarity_gap = 0;  // max over interior sites of min(-laplacian(s), s - gamma)
};

/// Least superharmonic majorant of gamma by projected Gauss-Seidel
/// (damping 1), with s = gamma held on the window ring. Stops once
/// laplacian(s) <= tol and the complementarity gap is <= tol at every
/// interior site. Throws ConvergenceError past max_sweeps, WindowOverflow if
/// s > gamma + tol next to the ring.
ObstacleResult obstacle_solve(const Grid<double>& gamma, double tol, std::int64_t max_sweeps = 1'000'000);

/// Toppling odometer against s - gamma for a point source of mass m:
/// reports max_gap over the noncoincidence set and gap_over_m.
StatsReport obstacle_toppling_gap(double m, const GreenTable& green, double tol);

struct Source {
  Point at;
  double mass = 0;
};

struct MultiSourceResult {
  DivisibleResult run;
  Cluster cluster;
};

/// Stabilizes sum m_i delta_{x_i} in a window sized from the sources.
MultiSourceResult multi_source(const std::vector<Source>& sources, double tol, const DivisibleOptions& opt = {});

/// Harmonic test polynomials: 1, x_i, x_i x_j (i < j), x_1^2 - x_j^2, and in
/// d = 2 also Re z^3, Im z^3.
struct HarmonicPolynomial {
  std::string name;
  int degree = 0;
  std::function<double(const double*)> eval;
};
std::vector<HarmonicPolynomial> harmonic_polynomials(int d);

/// For each test polynomial h compares
///   lhs = r^-d sum_{y in c} h(y / r)   and   rhs = sum_i a_i h(x_i / r),
/// reporting "<h>_lhs", "<h>_rhs" and "<h>_rel" = |lhs - rhs| / (r^-d sum_y |h(y / r)|).
StatsReport quadrature_check(const Cluster& c, const std::vector<Point>& sources, const std::vector<double>& weights,
                             double r);

/// Two sources of mass floor(pi (a r)^2) at +-r e_1 in Z^2. The cluster
/// boundary, rescaled by 1/r, is compared with the quartic
///   (x^2 + y^2)^2 - 2 a^2 (x^2 + y^2) - 2 (x^2 - y^2) = 0
/// by symmetric Hausdorff distance against a dense sampling of the curve
/// rho(theta)^2 = 2 (a^2 + cos 2 theta).
double two_source_boundary_error(double a, int r);

}  // namespace lapgrowth
