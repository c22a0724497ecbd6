#include "lapgrowth/green.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>

#include "lapgrowth/errors.hpp"

namespace lapgrowth {

double green_constant_a2() { return (2.0 * std::numbers::egamma + std::log(8.0)) / std::numbers::pi; }

double green_constant_ad(int d) {
  if (d < 3) throw std::invalid_argument("green_constant_ad: d must be >= 3");
  return 2.0 / ((d - 2) * unit_ball_volume(d));
}

double green_asymptotic_radius(double r, int d) {
  if (!(r > 0)) throw std::invalid_argument("green_asymptotic: G is singular at the origin");
  if (d == 2) return -(2.0 / std::numbers::pi) * std::log(r) - green_constant_a2();
  if (d >= 3) return green_constant_ad(d) * std::pow(r, 2.0 - d);
  throw std::invalid_argument("green_asymptotic: d must be >= 2");
}

double green_asymptotic(const Point& x) {
  if (x.is_origin()) throw std::invalid_argument("green_asymptotic: G is singular at the origin");
  return green_asymptotic_radius(x.norm(), x.dim);
}

namespace {

std::size_t offset_index(std::size_t k, std::ptrdiff_t off) {
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off);
}

double max_residual(const Grid<double>& g, const std::vector<std::uint8_t>& ring, std::size_t origin) {
  const auto offs = g.neighbor_offsets();
  const double inv2d = 1.0 / static_cast<double>(offs.size());
  double worst = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (ring[k]) continue;
    double lap = 0;
    for (auto off : offs) lap += g[offset_index(k, off)] - g[k];
    worst = std::max(worst, std::abs(inv2d * lap + (k == origin ? 1.0 : 0.0)));
  }
  return worst;
}

// Orbit of a point under signed coordinate permutations, enumerated in a
// fixed order so the symmetrised mean is bit-identical across the orbit.
std::vector<Point> signed_permutations(const Point& p) {
  const int d = p.dim;
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Point> out;
  do {
    for (unsigned signs = 0; signs < (1u << d); ++signs) {
      Point q(d);
      for (int i = 0; i < d; ++i) q[i] = ((signs >> i) & 1u) ? -p[perm[static_cast<std::size_t>(i)]] : p[perm[static_cast<std::size_t>(i)]];
      out.push_back(q);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool is_canonical(const Point& p) {
  for (int i = 0; i < p.dim; ++i) {
    if (p[i] < 0) return false;
    if (i > 0 && p[i] > p[i - 1]) return false;
  }
  return true;
}

void symmetrise(Grid<double>& g) {
  Grid<double> out = g;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point p = g.point(k);
    if (!is_canonical(p)) continue;
    const auto orbit = signed_permutations(p);
    double sum = 0;
    for (const auto& q : orbit) sum += g.at(q);
    const double mean = sum / static_cast<double>(orbit.size());
    for (const auto& q : orbit) out.at(q) = mean;
  }
  g = std::move(out);
}

}  // namespace

GreenTable green_exact(int d, int R, double tol) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("green_exact: d must be in 2..4");
  if (R < 8) throw std::invalid_argument("green_exact: R must be >= 8");
  if (!(tol > 0)) throw std::invalid_argument("green_exact: tolerance must be positive");

  const int outer = 2 * R;
  Grid<double> g = Grid<double>::centered(d, outer, 0.0);
  const auto ring = g.ring_mask();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (ring[k]) g[k] = green_asymptotic(g.point(k));

  const std::size_t origin = g.index(Point(d));
  const auto offs = g.neighbor_offsets();
  const double two_d = static_cast<double>(offs.size());
  const int n = 2 * outer;  // intervals per side
  const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / n));

  // Convergence is judged on the residual, checked every few sweeps; the
  // solve stops slightly below tol so symmetrisation cannot push it over.
  const int max_sweeps = 200000;
  int sweep = 0;
  double res = max_residual(g, ring, origin);
  while (res > 0.5 * tol) {
    if (sweep >= max_sweeps) throw ConvergenceError("green_exact residual " + std::to_string(res));
    for (int rep = 0; rep < 16; ++rep, ++sweep) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (ring[k]) continue;
        double s = 0;
        for (auto off : offs) s += g[offset_index(k, off)];
        if (k == origin) s += two_d;
        g[k] += omega * (s / two_d - g[k]);
      }
    }
    res = max_residual(g, ring, origin);
  }
  symmetrise(g);
  res = max_residual(g, ring, origin);
  if (res > tol) throw ConvergenceError("green_exact residual after symmetrisation " + std::to_string(res));

  GreenTable tbl;
  tbl.d = d;
  tbl.R = R;
  tbl.tolerance = tol;
  tbl.residual = res;
  tbl.boundary_error_bound = kGreenBoundaryKappa * std::pow(2.0 * R, -d);
  tbl.values = Grid<double>::centered(d, R, 0.0);
  const double shift = d == 2 ? g[origin] : 0.0;
  for (std::size_t k = 0; k < tbl.values.size(); ++k) tbl.values[k] = g.at(tbl.values.point(k)) - shift;
  return tbl;
}

Grid<double> convolve_green(const Grid<double>& f, const GreenTable& tbl) {
  if (f.dim() != tbl.d) throw std::invalid_argument("convolve_green: dimension mismatch");
  std::vector<std::pair<Point, double>> support;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] != 0.0) support.emplace_back(f.point(k), f[k]);

  Grid<double> F(f.lo(), f.hi(), 0.0);
  for (std::size_t k = 0; k < F.size(); ++k) {
    const Point x = F.point(k);
    double acc = 0;
    for (const auto& [y, w] : support) {
      const Point diff = x - y;
      if (!tbl.covers(diff))
        throw std::out_of_range("convolve_green: support point " + y.to_string() + " too close to the table boundary");
      acc += w * tbl.values[tbl.values.unchecked_index(diff)];
    }
    F[k] = -acc;
  }
  return F;
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "cache writer assumes a little-endian host");
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) throw std::runtime_error("green cache: truncated file");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

constexpr char kGreenMagic[4] = {'L', 'G', 'G', 'F'};

}  // namespace

void write_green_cache(const GreenTable& tbl, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("green cache: cannot open " + path.string());
  os.write(kGreenMagic, 4);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(tbl.d));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(tbl.R));
  put_le<float>(os, static_cast<float>(tbl.tolerance));
  for (double v : tbl.values.values()) put_le<double>(os, v);
  if (!os) throw std::runtime_error("green cache: write failed for " + path.string());
}

GreenTable read_green_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("green cache: cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kGreenMagic, 4) != 0) throw std::runtime_error("green cache: bad magic");
  GreenTable tbl;
  tbl.d = static_cast<int>(get_le<std::uint32_t>(is));
  tbl.R = static_cast<int>(get_le<std::uint32_t>(is));
  tbl.tolerance = get_le<float>(is);
  if (tbl.d < 2 || tbl.d > kMaxDim || tbl.R < 8) throw std::runtime_error("green cache: bad header");
  tbl.values = Grid<double>::centered(tbl.d, tbl.R, 0.0);
  for (auto& v : tbl.values.values()) v = get_le<double>(is);
  tbl.boundary_error_bound = kGreenBoundaryKappa * std::pow(2.0 * tbl.R, -tbl.d);
  tbl.residual = tbl.tolerance;  // green_exact guarantees residual <= tolerance
  return tbl;
}

}  // namespace lapgrowth
