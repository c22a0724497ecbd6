#include "lapgrowth/lattice.hpp"

#include <cmath>
#include <numbers>
#include <queue>

namespace lapgrowth {

Point::Point(int d) : dim(d) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("Point: dimension must be in 1.." + std::to_string(kMaxDim));
}

Point::Point(std::initializer_list<std::int32_t> coords) : dim(static_cast<int>(coords.size())) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Point: dimension must be in 1.." + std::to_string(kMaxDim));
  std::copy(coords.begin(), coords.end(), c.begin());
}

std::int64_t Point::norm2() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim; ++i) s += static_cast<std::int64_t>(c[static_cast<std::size_t>(i)]) * c[static_cast<std::size_t>(i)];
  return s;
}

double Point::norm() const { return std::sqrt(static_cast<double>(norm2())); }

bool Point::is_origin() const {
  return std::all_of(c.begin(), c.end(), [](std::int32_t v) { return v == 0; });
}

Point& Point::operator+=(const Point& o) {
  for (std::size_t i = 0; i < kMaxDim; ++i) c[i] += o.c[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  for (std::size_t i = 0; i < kMaxDim; ++i) c[i] -= o.c[i];
  return *this;
}

std::string Point::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim; ++i) {
    if (i) s += ",";
    s += std::to_string((*this)[i]);
  }
  return s + ")";
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p.dim);
  for (auto v : p.c) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Point unit(int d, int axis, int sign) {
  Point p(d);
  p[axis] = sign > 0 ? 1 : -1;
  return p;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double radius_for_volume(double volume, int d) { return std::pow(volume / unit_ball_volume(d), 1.0 / d); }

std::vector<Point> neighbors(const Point& x) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(2 * x.dim));
  for (int i = 0; i < x.dim; ++i) {
    Point p = x;
    p[i] += 1;
    out.push_back(p);
    p[i] -= 2;
    out.push_back(p);
  }
  return out;
}

namespace {

// r^2 rounded down to the integer squared distances it admits; the epsilon
// keeps r = sqrt(k) from excluding the sites at squared distance k.
std::int64_t squared_radius_floor(double r) {
  return static_cast<std::int64_t>(std::floor(r * r + 1e-9));
}

}  // namespace

std::vector<Point> ball_sites(const Point& center, double r) {
  if (!(r >= 0)) throw std::invalid_argument("ball_sites: radius must be >= 0");
  const int d = center.dim;
  const auto R = static_cast<std::int32_t>(std::floor(r + 1e-9));
  const std::int64_t r2 = squared_radius_floor(r);
  std::vector<Point> out;
  Point off(d);
  for (int i = 0; i < d; ++i) off[i] = -R;
  while (true) {
    if (off.norm2() <= r2) out.push_back(center + off);
    int i = d - 1;
    while (i >= 0 && off[i] == R) {
      off[i] = -R;
      --i;
    }
    if (i < 0) break;
    ++off[i];
  }
  return out;
}

Cluster::Cluster(std::vector<Point> sites) : sites_(std::move(sites)) {
  lookup_.reserve(sites_.size());
  for (const auto& p : sites_) {
    if (!sites_.empty() && p.dim != sites_.front().dim) throw std::invalid_argument("Cluster: mixed dimensions");
    if (!lookup_.insert(p).second) throw std::invalid_argument("Cluster: duplicate site " + p.to_string());
  }
}

Cluster::Cluster(std::vector<Point> sites, std::vector<std::int64_t> arrival) : Cluster(std::move(sites)) {
  if (arrival.size() != sites_.size()) throw std::invalid_argument("Cluster: arrival size mismatch");
  std::vector<std::uint8_t> seen(arrival.size() + 1, 0);
  for (auto a : arrival) {
    if (a < 1 || static_cast<std::size_t>(a) > arrival.size() || seen[static_cast<std::size_t>(a)])
      throw std::invalid_argument("Cluster: arrival indices must be a bijection onto 1..n");
    seen[static_cast<std::size_t>(a)] = 1;
  }
  arrival_ = std::move(arrival);
}

std::pair<Point, Point> Cluster::bounding_box() const {
  if (sites_.empty()) throw std::invalid_argument("Cluster: empty cluster has no bounding box");
  Point lo = sites_.front(), hi = sites_.front();
  for (const auto& p : sites_)
    for (int i = 0; i < p.dim; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  return {lo, hi};
}

bool Cluster::is_connected() const {
  if (sites_.empty()) return true;
  std::unordered_set<Point, PointHash> seen{sites_.front()};
  std::queue<Point> q;
  q.push(sites_.front());
  while (!q.empty()) {
    const Point p = q.front();
    q.pop();
    for (const auto& y : neighbors(p))
      if (contains(y) && seen.insert(y).second) q.push(y);
  }
  return seen.size() == sites_.size();
}

std::vector<Point> Cluster::boundary_sites() const {
  std::vector<Point> out;
  for (const auto& p : sites_) {
    const auto nb = neighbors(p);
    if (std::any_of(nb.begin(), nb.end(), [&](const Point& y) { return !contains(y); })) out.push_back(p);
  }
  return out;
}

Grid<std::uint8_t> Cluster::mask(const Point& lo, const Point& hi) const {
  Grid<std::uint8_t> g(lo, hi, 0);
  for (const auto& p : sites_)
    if (g.contains(p)) g[g.unchecked_index(p)] = 1;
  return g;
}

bool Cluster::same_sites(const Cluster& o) const {
  if (o.size() != size()) return false;
  return std::all_of(sites_.begin(), sites_.end(), [&](const Point& p) { return o.contains(p); });
}

Radii inradius_outradius(const Cluster& c, const Point& center) {
  if (c.empty()) throw std::invalid_argument("inradius_outradius: empty cluster");
  if (!c.contains(center)) throw std::invalid_argument("inradius_outradius: center not in cluster");
  std::int64_t out2 = 0;
  for (const auto& p : c.sites()) out2 = std::max(out2, (p - center).norm2());

  // Nearest lattice point missing from the cluster. Anything outside the box
  // of half-width ceil(r_out)+1 is farther than every cluster site, so the
  // scan only has to cover that box.
  const auto R = static_cast<std::int32_t>(std::ceil(std::sqrt(static_cast<double>(out2)))) + 1;
  const int d = center.dim;
  std::int64_t miss2 = static_cast<std::int64_t>(R) * R;
  Point off(d);
  for (int i = 0; i < d; ++i) off[i] = -R;
  while (true) {
    const std::int64_t n2 = off.norm2();
    if (n2 < miss2 && !c.contains(center + off)) miss2 = n2;
    int i = d - 1;
    while (i >= 0 && off[i] == R) {
      off[i] = -R;
      --i;
    }
    if (i < 0) break;
    ++off[i];
  }
  std::int64_t in2 = 0;
  for (const auto& p : c.sites()) {
    const std::int64_t n2 = (p - center).norm2();
    if (n2 < miss2) in2 = std::max(in2, n2);
  }
  return {std::sqrt(static_cast<double>(in2)), std::sqrt(static_cast<double>(out2))};
}

}  // namespace lapgrowth
