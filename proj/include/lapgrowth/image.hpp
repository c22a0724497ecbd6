#pragma once

// RGB rendering of planar fields and binary PPM (P6) output.
//
// Pixel layout: the first coordinate x runs along columns left to right, the
// second coordinate y runs up, so row 0 holds the largest y of the window.

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "lapgrowth/lattice.hpp"
#include "lapgrowth/rotor.hpp"
#include "lapgrowth/sandpile.hpp"

namespace lapgrowth {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kWhite{255, 255, 255};
/// Sandpile heights 0, 1, 2, 3.
inline constexpr std::array<Rgb, 4> kHeightPalette{{{255, 255, 255}, {255, 0, 0}, {128, 0, 128}, {0, 0, 255}}};
/// Rotor directions indexed E, W, N, S.
inline constexpr std::array<Rgb, 4> kRotorPalette{{{0, 160, 0}, {255, 200, 0}, {255, 0, 0}, {0, 0, 255}}};
inline constexpr Rgb kIdlaLate{255, 0, 0};   // pi |x|^2 > j
inline constexpr Rgb kIdlaEarly{0, 0, 255};  // pi |x|^2 <= j

struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first

  ImageBuffer() = default;
  ImageBuffer(int w, int h, Rgb fill = kWhite);

  Rgb get(int col, int row) const;
  void set(int col, int row, Rgb c);
  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

/// Pixel of lattice point p in a window [lo, hi] (d = 2).
std::pair<int, int> pixel_of(const Point& p, const Point& lo, const Point& hi);

/// One pixel per window site. Throws VerificationError for heights outside 0..3.
ImageBuffer render_heights(const SandpileField& field);

/// Cluster sites colored by final rotor direction, everything else white.
ImageBuffer render_rotors(const RotorState& state, const Cluster& cluster);

/// Window [-R, R]^2 with R one more than the largest coordinate in the cluster.
/// Site x(j) is red when pi |x(j)|^2 > j and blue otherwise. Throws
/// std::invalid_argument without arrival data.
ImageBuffer render_idla_colors(const Cluster& cluster);

/// Grey levels 255 (1 - min(mass, 1)) over the window.
ImageBuffer render_mass(const Grid<double>& mass);

/// "P6\n{w} {h}\n255\n" followed by the raw triples.
std::vector<std::uint8_t> encode_ppm(const ImageBuffer& img);
void emit_ppm(const ImageBuffer& img, const std::filesystem::path& path);
ImageBuffer read_ppm(const std::filesystem::path& path);

}  // namespace lapgrowth
