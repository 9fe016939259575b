#pragma once

// Seeded random streams. The generator is SplitMix64 used as a counter-based
// source: the n-th output of stream (seed, stream_id) is
//
//   key    = mix(seed ^ mix(stream_id ^ 0xD1B54A32D192ED03))
//   out[n] = mix(key + (n + 1) * 0x9E3779B97F4A7C15)
//
// where mix is the SplitMix64 finalizer. Uniforms take the top 53 bits,
// u = ((x >> 11) + 0.5) * 2^-53, which lies strictly inside (0, 1). Normals use
// the cosine branch of Box-Muller, consuming two uniforms per draw:
// z = sqrt(-2 ln u1) * cos(2 pi u2). Any stream can be reproduced from
// (seed, stream_id) alone, so trials and columns can be drawn in any order.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace skillaudit {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key_(splitmix64_mix(seed ^ splitmix64_mix(stream_id ^ 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGamma);
  }

  double uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace skillaudit
