#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lapgrowth {

/// splitmix64 finaliser; used for seed derivation and per-site hashing.
std::uint64_t splitmix64(std::uint64_t x);

/// Reproducible random stream: std::mt19937_64 (whose output sequence is fixed
/// by the C++ standard) seeded with splitmix64(seed). Integer ranges are drawn
/// with our own reduction, never with <random> distributions, whose output is
/// implementation-defined.
///
/// Substreams: split(i) seeds a child with
///   splitmix64(splitmix64(seed) ^ ((i + 1) * 0xD1B54A32D192ED03)),
/// so replica i sees the same numbers whatever thread runs it.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64";

  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  std::string_view algorithm() const { return kAlgorithm; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, n), n >= 1; exact (multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform direction index in [0, two_d). Powers of two come from a bit pool
  /// so a 2d walk consumes one 64-bit draw per 32 steps.
  unsigned direction(unsigned two_d) {
    if (two_d == 4) return take_bits(2);
    if (two_d == 2) return take_bits(1);
    return static_cast<unsigned>(below(two_d));
  }

  RngStream split(std::uint64_t index) const;

 private:
  unsigned take_bits(int bits) {
    if (pool_bits_ < bits) {
      pool_ = engine_();
      pool_bits_ = 64;
    }
    const auto v = static_cast<unsigned>(pool_ & ((1ULL << bits) - 1));
    pool_ >>= bits;
    pool_bits_ -= bits;
    return v;
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t pool_ = 0;
  int pool_bits_ = 0;
};

}  // namespace lapgrowth
