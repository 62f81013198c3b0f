#pragma once

#include <cstdint>

namespace aoi {

// SplitMix64 (Steele, Lea & Flood; the java.util.SplittableRandom mixer).
// One 64-bit add plus two xor-shift-multiply rounds per draw, bit-stable
// across platforms, so seeded runs reproduce exactly anywhere.
//
// Monte Carlo replication r of a run with base seed s uses stream s + r.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace aoi
