#include "lapgrowth/persist.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "json.hpp"

namespace lapgrowth {

namespace {

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
  auto p = stem;
  p += ext;
  return p;
}

template <class T>
void to_le(T v, unsigned char* out) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T); ++i) out[i] = b[sizeof(T) - 1 - i];
  else
    std::memcpy(out, b, sizeof(T));
}

template <class T>
T from_le(const unsigned char* in) {
  unsigned char b[sizeof(T)];
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = in[sizeof(T) - 1 - i];
  else
    std::memcpy(b, in, sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::vector<int> coords(const Point& p) { return std::vector<int>(p.c.begin(), p.c.begin() + p.dim); }

Point from_coords(const std::vector<int>& v) {
  Point p(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<int>(i)] = v[i];
  return p;
}

}  // namespace

template <> std::string grid_dtype<std::uint8_t>() { return "uint8"; }
template <> std::string grid_dtype<std::int32_t>() { return "int32"; }
template <> std::string grid_dtype<std::int64_t>() { return "int64"; }
template <> std::string grid_dtype<std::uint64_t>() { return "uint64"; }
template <> std::string grid_dtype<double>() { return "float64"; }

template <class T>
void write_grid(const Grid<T>& g, const std::filesystem::path& stem) {
  std::vector<unsigned char> bytes(8 + g.size() * sizeof(T));
  std::memcpy(bytes.data(), kGridMagic, 8);
  for (std::size_t k = 0; k < g.size(); ++k) to_le<T>(g[k], bytes.data() + 8 + k * sizeof(T));
  std::ofstream bin(with_ext(stem, ".bin"), std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + with_ext(stem, ".bin").string());
  bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));

  const nlohmann::json meta = {{"magic", kGridMagic}, {"dtype", grid_dtype<T>()}, {"dim", g.dim()},
                               {"lo", coords(g.lo())}, {"hi", coords(g.hi())}, {"count", g.size()}};
  std::ofstream js(with_ext(stem, ".json"));
  if (!js) throw std::runtime_error("cannot write " + with_ext(stem, ".json").string());
  js << meta.dump(2) << '\n';
}

template <class T>
Grid<T> read_grid(const std::filesystem::path& stem) {
  std::ifstream js(with_ext(stem, ".json"));
  if (!js) throw std::runtime_error("cannot open " + with_ext(stem, ".json").string());
  const nlohmann::json meta = nlohmann::json::parse(js);
  if (meta.at("magic") != kGridMagic) throw std::runtime_error(stem.string() + ": bad sidecar magic");
  if (meta.at("dtype") != grid_dtype<T>())
    throw std::runtime_error(stem.string() + ": dtype " + meta.at("dtype").get<std::string>() + ", expected " +
                             grid_dtype<T>());
  Grid<T> g(from_coords(meta.at("lo").get<std::vector<int>>()), from_coords(meta.at("hi").get<std::vector<int>>()));
  if (meta.at("count").get<std::size_t>() != g.size()) throw std::runtime_error(stem.string() + ": count mismatch");

  std::ifstream bin(with_ext(stem, ".bin"), std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + with_ext(stem, ".bin").string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  if (bytes.size() != 8 + g.size() * sizeof(T)) throw std::runtime_error(stem.string() + ": wrong file size");
  if (std::memcmp(bytes.data(), kGridMagic, 8) != 0) throw std::runtime_error(stem.string() + ": bad magic");
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = from_le<T>(bytes.data() + 8 + k * sizeof(T));
  return g;
}

#define LAPGROWTH_GRID_IO(T)                                                  \
  template void write_grid<T>(const Grid<T>&, const std::filesystem::path&); \
  template Grid<T> read_grid<T>(const std::filesystem::path&);
LAPGROWTH_GRID_IO(std::uint8_t)
LAPGROWTH_GRID_IO(std::int32_t)
LAPGROWTH_GRID_IO(std::int64_t)
LAPGROWTH_GRID_IO(std::uint64_t)
LAPGROWTH_GRID_IO(double)
#undef LAPGROWTH_GRID_IO

Grid<std::int64_t> cluster_grid(const Cluster& c) {
  if (c.empty()) throw std::invalid_argument("cluster_grid: empty cluster");
  const auto [lo, hi] = c.bounding_box();
  Grid<std::int64_t> g(lo, hi, 0);
  for (std::size_t k = 0; k < c.size(); ++k) g.at(c.sites()[k]) = c.has_arrival() ? c.arrival()[k] : 1;
  return g;
}

Cluster cluster_from_grid(const Grid<std::int64_t>& g) {
  std::vector<std::pair<std::int64_t, Point>> items;
  bool arrival = false;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] == 0) continue;
    items.emplace_back(g[k], g.point(k));
    arrival = arrival || g[k] != 1;
  }
  if (items.size() == 1) arrival = true;
  if (!arrival) {
    std::vector<Point> pts;
    for (auto& [a, p] : items) pts.push_back(p);
    return Cluster(std::move(pts));
  }
  std::sort(items.begin(), items.end());
  std::vector<Point> pts;
  std::vector<std::int64_t> arr;
  for (auto& [a, p] : items) {
    pts.push_back(p);
    arr.push_back(a);
  }
  return Cluster(std::move(pts), std::move(arr));
}

}  // namespace lapgrowth
