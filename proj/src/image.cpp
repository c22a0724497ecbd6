#include "lapgrowth/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lapgrowth/errors.hpp"

namespace lapgrowth {

ImageBuffer::ImageBuffer(int w, int h, Rgb fill) : width(w), height(h) {
  if (w < 0 || h < 0) throw std::invalid_argument("image dimensions must be non-negative");
  rgb.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (std::size_t k = 0; k < rgb.size(); k += 3) std::copy(fill.begin(), fill.end(), rgb.begin() + static_cast<std::ptrdiff_t>(k));
}

Rgb ImageBuffer::get(int col, int row) const {
  const std::size_t k = (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)) * 3;
  return {rgb.at(k), rgb.at(k + 1), rgb.at(k + 2)};
}

void ImageBuffer::set(int col, int row, Rgb c) {
  if (col < 0 || col >= width || row < 0 || row >= height) throw std::out_of_range("pixel outside image");
  const std::size_t k = (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)) * 3;
  rgb[k] = c[0];
  rgb[k + 1] = c[1];
  rgb[k + 2] = c[2];
}

std::pair<int, int> pixel_of(const Point& p, const Point& lo, const Point& hi) {
  return {p[0] - lo[0], hi[1] - p[1]};
}

namespace {

void require_planar(int d, const char* who) {
  if (d != 2) throw std::invalid_argument(std::string(who) + ": only d = 2 can be rendered");
}

template <class T>
ImageBuffer blank_for(const Grid<T>& g) {
  return ImageBuffer(g.extent(0), g.extent(1));
}

}  // namespace

ImageBuffer render_heights(const SandpileField& field) {
  const auto& h = field.heights;
  require_planar(h.dim(), "render_heights");
  ImageBuffer img = blank_for(h);
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k] == 0) continue;
    if (h[k] < 0 || h[k] > 3) throw VerificationError("height " + std::to_string(h[k]) + " at " + h.point(k).to_string());
    const auto [c, r] = pixel_of(h.point(k), h.lo(), h.hi());
    img.set(c, r, kHeightPalette[static_cast<std::size_t>(h[k])]);
  }
  return img;
}

ImageBuffer render_rotors(const RotorState& state, const Cluster& cluster) {
  const auto& g = state.dirs;
  require_planar(g.dim(), "render_rotors");
  ImageBuffer img = blank_for(g);
  for (const Point& p : cluster.sites()) {
    const auto [c, r] = pixel_of(p, g.lo(), g.hi());
    img.set(c, r, kRotorPalette[g.at(p)]);
  }
  return img;
}

ImageBuffer render_idla_colors(const Cluster& cluster) {
  if (!cluster.has_arrival()) throw std::invalid_argument("render_idla_colors: cluster has no arrival data");
  if (!cluster.empty()) require_planar(cluster.dim(), "render_idla_colors");
  int R = 0;
  for (const Point& p : cluster.sites()) R = std::max({R, std::abs(p[0]), std::abs(p[1])});
  ++R;
  const Point lo{-R, -R}, hi{R, R};
  ImageBuffer img(2 * R + 1, 2 * R + 1);
  for (std::size_t k = 0; k < cluster.size(); ++k) {
    const Point& p = cluster.sites()[k];
    const double lhs = std::numbers::pi * static_cast<double>(p.norm2());
    const auto [c, r] = pixel_of(p, lo, hi);
    img.set(c, r, lhs > static_cast<double>(cluster.arrival()[k]) ? kIdlaLate : kIdlaEarly);
  }
  return img;
}

ImageBuffer render_mass(const Grid<double>& mass) {
  require_planar(mass.dim(), "render_mass");
  ImageBuffer img = blank_for(mass);
  for (std::size_t k = 0; k < mass.size(); ++k) {
    const double v = std::clamp(mass[k], 0.0, 1.0);
    const auto g = static_cast<std::uint8_t>(std::lround(255 * (1 - v)));
    const auto [c, r] = pixel_of(mass.point(k), mass.lo(), mass.hi());
    img.set(c, r, {g, g, g});
  }
  return img;
}

std::vector<std::uint8_t> encode_ppm(const ImageBuffer& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.rgb.begin(), img.rgb.end());
  return out;
}

void emit_ppm(const ImageBuffer& img, const std::filesystem::path& path) {
  const auto bytes = encode_ppm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ImageBuffer read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P6" || maxval != 255 || w < 0 || h < 0) throw std::runtime_error(path.string() + ": not an 8-bit P6 file");
  in.get();
  ImageBuffer img(w, h);
  in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.rgb.size())) throw std::runtime_error(path.string() + ": truncated");
  return img;
}

}  // namespace lapgrowth
