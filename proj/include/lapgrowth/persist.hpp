#pragma once

// Raw grid files: "<stem>.bin" holds the 8-byte magic "LAPGRID1" followed by
// the values in little-endian fixed width, last coordinate fastest; the
// sidecar "<stem>.json" records magic, dtype, dim, lo, hi and count.

#include <filesystem>
#include <string>

#include "lapgrowth/lattice.hpp"

namespace lapgrowth {

inline constexpr char kGridMagic[9] = "LAPGRID1";

/// "uint8", "int32", "int64", "uint64" or "float64".
template <class T>
std::string grid_dtype();

template <class T>
void write_grid(const Grid<T>& g, const std::filesystem::path& stem);

/// Throws std::runtime_error on a missing file, bad magic, dtype mismatch or
/// wrong size.
template <class T>
Grid<T> read_grid(const std::filesystem::path& stem);

/// Grid over the bounding box of the cluster holding arrival indices (0 off
/// the cluster, 1 everywhere on it when there is no arrival data).
Grid<std::int64_t> cluster_grid(const Cluster& c);
Cluster cluster_from_grid(const Grid<std::int64_t>& g);

}  // namespace lapgrowth
