#pragma once

// Lattice geometry on Z^d: points, dense box-shaped grid windows, clusters
// of occupied sites and the shape statistics shared by all growth models.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lapgrowth {

inline constexpr int kMaxDim = 4;

/// A point of Z^d, 1 <= d <= kMaxDim. Unused coordinates are kept at zero so
/// that comparison and hashing can look at the whole array.
struct Point {
  std::array<std::int32_t, kMaxDim> c{};
  int dim = 0;

  Point() = default;
  explicit Point(int d);  // origin of Z^d
  Point(std::initializer_list<std::int32_t> coords);

  std::int32_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  std::int64_t norm2() const;
  double norm() const;
  bool is_origin() const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

  std::string to_string() const;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

/// Unit vector +e_axis (sign > 0) or -e_axis in dimension d.
Point unit(int d, int axis, int sign = 1);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Radius r with unit_ball_volume(d) * r^d == volume.
double radius_for_volume(double volume, int d);

/// The 2d lattice neighbours in the fixed order +e_1, -e_1, ..., +e_d, -e_d.
/// Direction index k corresponds to axis k/2, sign + for even k.
std::vector<Point> neighbors(const Point& x);

/// Closed Euclidean ball: all y with |y - center| <= r.
std::vector<Point> ball_sites(const Point& center, double r);

/// Dense field over the box [lo, hi] (inclusive), row-major with the last
/// coordinate varying fastest. Out-of-box access through at() throws.
template <class T>
class Grid {
 public:
  Grid() = default;

  Grid(const Point& lo, const Point& hi, T fill = T{}) : lo_(lo), hi_(hi) {
    if (lo.dim < 1 || lo.dim > kMaxDim || lo.dim != hi.dim) throw std::invalid_argument("Grid: bad dimension");
    std::size_t total = 1;
    for (int i = 0; i < lo.dim; ++i) {
      if (lo[i] > hi[i]) throw std::invalid_argument("Grid: lo must be <= hi componentwise");
      extent_[static_cast<std::size_t>(i)] = hi[i] - lo[i] + 1;
      total *= static_cast<std::size_t>(extent_[static_cast<std::size_t>(i)]);
    }
    std::ptrdiff_t s = 1;
    for (int i = lo.dim - 1; i >= 0; --i) {
      stride_[static_cast<std::size_t>(i)] = s;
      s *= extent_[static_cast<std::size_t>(i)];
    }
    data_.assign(total, fill);
  }

  /// Box [-radius, radius]^d.
  static Grid centered(int d, int radius, T fill = T{}) {
    Point lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = -radius;
      hi[i] = radius;
    }
    return Grid(lo, hi, fill);
  }

  int dim() const { return lo_.dim; }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  std::size_t size() const { return data_.size(); }
  int extent(int axis) const { return extent_[static_cast<std::size_t>(axis)]; }
  std::ptrdiff_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  bool contains(const Point& p) const {
    if (p.dim != lo_.dim) return false;
    for (int i = 0; i < lo_.dim; ++i)
      if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    return true;
  }

  std::size_t index(const Point& p) const {
    if (!contains(p)) throw std::out_of_range("Grid: point " + p.to_string() + " outside window");
    return unchecked_index(p);
  }

  std::size_t unchecked_index(const Point& p) const {
    std::ptrdiff_t idx = 0;
    for (int i = 0; i < lo_.dim; ++i) idx += (p[i] - lo_[i]) * stride_[static_cast<std::size_t>(i)];
    return static_cast<std::size_t>(idx);
  }

  Point point(std::size_t idx) const {
    Point p(lo_.dim);
    auto rem = static_cast<std::ptrdiff_t>(idx);
    for (int i = 0; i < lo_.dim; ++i) {
      p[i] = lo_[i] + static_cast<std::int32_t>(rem / stride_[static_cast<std::size_t>(i)]);
      rem %= stride_[static_cast<std::size_t>(i)];
    }
    return p;
  }

  T& at(const Point& p) { return data_[index(p)]; }
  const T& at(const Point& p) const { return data_[index(p)]; }

  /// Value at p, or `outside` when p is not in the window.
  T value_or(const Point& p, T outside) const { return contains(p) ? data_[unchecked_index(p)] : outside; }

  T& operator[](std::size_t idx) { return data_[idx]; }
  const T& operator[](std::size_t idx) const { return data_[idx]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  /// Linear-index offsets of the neighbours, same order as neighbors().
  std::vector<std::ptrdiff_t> neighbor_offsets() const {
    std::vector<std::ptrdiff_t> off;
    off.reserve(static_cast<std::size_t>(2 * lo_.dim));
    for (int i = 0; i < lo_.dim; ++i) {
      off.push_back(stride_[static_cast<std::size_t>(i)]);
      off.push_back(-stride_[static_cast<std::size_t>(i)]);
    }
    return off;
  }

  /// True for sites on the outermost layer of the box.
  bool on_ring(const Point& p) const {
    for (int i = 0; i < lo_.dim; ++i)
      if (p[i] == lo_[i] || p[i] == hi_[i]) return true;
    return false;
  }

  /// 1 on the outermost layer, 0 elsewhere.
  std::vector<std::uint8_t> ring_mask() const {
    std::vector<std::uint8_t> mask(data_.size(), 0);
    for (std::size_t k = 0; k < data_.size(); ++k) mask[k] = on_ring(point(k)) ? 1 : 0;
    return mask;
  }

  template <class U>
  bool same_shape(const Grid<U>& o) const {
    return lo_ == o.lo() && hi_ == o.hi();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.data_ == b.data_;
  }

 private:
  Point lo_, hi_;
  std::array<int, kMaxDim> extent_{};
  std::array<std::ptrdiff_t, kMaxDim> stride_{};
  std::vector<T> data_;
};

/// Finite set of occupied sites, optionally with the arrival order 1..n.
class Cluster {
 public:
  Cluster() = default;
  explicit Cluster(std::vector<Point> sites);
  Cluster(std::vector<Point> sites, std::vector<std::int64_t> arrival);

  const std::vector<Point>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  int dim() const { return sites_.empty() ? 0 : sites_.front().dim; }
  bool contains(const Point& p) const { return lookup_.contains(p); }

  bool has_arrival() const { return !arrival_.empty(); }
  /// arrival()[k] is the arrival index of sites()[k].
  const std::vector<std::int64_t>& arrival() const { return arrival_; }

  /// Smallest box containing every site.
  std::pair<Point, Point> bounding_box() const;
  /// Nearest-neighbour connectivity of the site set.
  bool is_connected() const;
  /// Sites with at least one lattice neighbour outside the cluster.
  std::vector<Point> boundary_sites() const;
  /// Indicator over the given window.
  Grid<std::uint8_t> mask(const Point& lo, const Point& hi) const;

  bool same_sites(const Cluster& o) const;

  /// Sites where `pred(value)` holds.
  template <class T, class Pred>
  static Cluster from_grid(const Grid<T>& g, Pred pred) {
    std::vector<Point> pts;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (pred(g[k])) pts.push_back(g.point(k));
    return Cluster(std::move(pts));
  }

 private:
  std::vector<Point> sites_;
  std::vector<std::int64_t> arrival_;
  std::unordered_set<Point, PointHash> lookup_;
};

struct Radii {
  double inner = 0;
  double outer = 0;
};

/// outer: largest |y - center| over the cluster. inner: largest lattice
/// distance rho such that every lattice point within rho of center belongs to
/// the cluster, so an exact discrete ball B(center, r) with r a lattice
/// distance reports inner == outer == r, and a single site reports 0.
Radii inradius_outradius(const Cluster& c, const Point& center);

/// Sum over y ~ x of f(y) - f(x). x and all its neighbours must be in the window.
template <class T>
T laplacian(const Grid<T>& f, const Point& x) {
  const std::size_t k = f.index(x);
  if (f.on_ring(x)) throw std::out_of_range("laplacian: " + x.to_string() + " touches the window boundary");
  T acc{};
  for (auto off : f.neighbor_offsets()) acc += f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off)] - f[k];
  return acc;
}

}  // namespace lapgrowth
