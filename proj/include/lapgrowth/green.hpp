#pragma once

// Green function of simple random walk on Z^d, normalised so that
// (1/2d) * laplacian(g) = -delta_0. In d = 2 this is minus the recurrent
// potential kernel, pinned at g(0) = 0; in d >= 3 it is the expected number
// of visits.

#include <filesystem>
#include <string>

#include "lapgrowth/lattice.hpp"

namespace lapgrowth {

/// Euler's constant term of the planar kernel: a_2 = (2*gamma + log 8) / pi.
double green_constant_a2();
/// a_d = 2 / ((d - 2) * omega_d) for d >= 3.
double green_constant_ad(int d);

/// Spherically symmetric asymptotic form G:
///   d = 2:  -(2/pi) log|x| - a_2
///   d >= 3: a_d |x|^(2-d)
/// Throws std::invalid_argument at the origin or for d < 2.
double green_asymptotic(const Point& x);
/// G evaluated at an arbitrary Euclidean radius r > 0.
double green_asymptotic_radius(double r, int d);

/// Tabulated exact Green function on the box [-R, R]^d.
struct GreenTable {
  int d = 0;
  int R = 0;
  Grid<double> values;
  /// kappa * (2R)^-d: worst-case error inherited from the Dirichlet data.
  double boundary_error_bound = 0;
  /// Max over the solve box of |(1/2d) laplacian(g) + delta_0| after symmetrisation.
  double residual = 0;
  double tolerance = 0;

  bool covers(const Point& x) const { return values.contains(x); }
  double operator()(const Point& x) const { return values.at(x); }
};

/// Conservative constant in boundary_error_bound.
inline constexpr double kGreenBoundaryKappa = 0.25;
inline constexpr double kGreenDefaultTolerance = 1e-10;

/// Solves (1/2d) laplacian(g) = -delta_0 on [-2R, 2R]^d by successive
/// over-relaxation with Dirichlet data green_asymptotic on the outer ring,
/// symmetrises over signed coordinate permutations, restricts to [-R, R]^d and
/// (d = 2) shifts so that g(0) = 0. Requires d >= 2 and R >= 8.
GreenTable green_exact(int d, int R, double tol = kGreenDefaultTolerance);

/// F(x) = -sum_y f(y) g(x - y) over the window of f, so that
/// laplacian(F) = 2d * f at interior sites. Throws std::out_of_range when some
/// x - y with f(y) != 0 falls outside the table.
Grid<double> convolve_green(const Grid<double>& f, const GreenTable& tbl);

/// Binary cache: 16-byte header {char magic[4] = "LGGF"; u32 d; u32 R;
/// f32 tolerance}, then (2R+1)^d little-endian f64 values in row-major order.
void write_green_cache(const GreenTable& tbl, const std::filesystem::path& path);
GreenTable read_green_cache(const std::filesystem::path& path);

}  // namespace lapgrowth
