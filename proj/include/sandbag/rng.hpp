#pragma once

#include <cstdint>

namespace sandbag {

// SplitMix64 (Steele, Lea, Flood 2014). Counter-based: output j of a stream
// is a pure function of (seed, j), and per-trajectory streams are derived
// from (master_seed, index) alone, so batches are reproducible regardless of
// generation order or thread count.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  std::uint64_t operator()() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  // Stream for trajectory `index` of a batch seeded with `master_seed`.
  static SplitMix64 stream(std::uint64_t master_seed, std::uint64_t index) {
    return SplitMix64(mix(master_seed) ^ mix(index * 0xD1B54A32D192ED03ull + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace sandbag
