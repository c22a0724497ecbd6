#pragma once

// Run configuration shared by the command-line tool and saved run directories.

#include <cstdint>
#include <filesystem>
#include <string>

#include "lapgrowth/rotor.hpp"
#include "lapgrowth/sandpile.hpp"

namespace lapgrowth {

inline constexpr int kConfigSchema = 1;

struct RunConfig {
  int schema = kConfigSchema;
  std::string model = "sandpile";  // sandpile | divisible | rotor | idla | algebra | estimate
  int d = 2;
  std::int64_t n = 1000;  // grains, walkers or particles
  double m = 1000;        // divisible-sandpile mass
  std::uint64_t seed = 1;
  std::string mechanism = "clockwise";  // clockwise | counterclockwise | standard
  std::string rotor_init = "N";         // E | W | N | S | random
  std::string policy = "fifo";          // fifo | lifo | random | sweep
  double tolerance = 0;                 // 0: model default
  std::string palette = "standard";
  std::string out;                      // empty: $LAPGROWTH_OUT or ./lapgrowth_out

  // estimate
  std::string what = "all";  // xi | zeta | lambda | tau | all
  int grid = 64;
  int R = 200;
  std::int64_t samples = 100000;
  std::int64_t burnin = -1;  // -1: n^2 log n
  int thin = 10;

  // algebra
  std::string graph;  // edge-list file; empty: built-in library
  std::string op = "all";  // identity | order | recurrents | tutte | unicycles | laws | all

  // idla
  int reps = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Canonical JSON (sorted keys, 2-space indent, trailing newline).
std::string to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys, a wrong schema or
/// ill-typed values throw std::invalid_argument.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& c, const std::filesystem::path& path);

/// Throws std::invalid_argument naming the offending field.
void validate(const RunConfig& c);

RotorMechanism mechanism_of(const RunConfig& c);
RotorInit rotor_init_of(const RunConfig& c);
TopplePolicy policy_of(const RunConfig& c);

/// c.out, else $LAPGROWTH_OUT, else "lapgrowth_out".
std::filesystem::path output_dir(const RunConfig& c);

}  // namespace lapgrowth
