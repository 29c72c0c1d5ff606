#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace sigsim {

using Seed = std::uint64_t;

// Addresses one generator stream: a (size, trial, group) cell of the run grid.
struct StreamKey {
  std::uint32_t size_index = 0;  // < 2^24
  std::uint64_t trial_index = 0; // < 2^39
  std::uint32_t group_index = 0; // 0 = left group, 1 = right group
};

namespace detail {

// SplitMix64 finalizer (Stafford mix13). Bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t pack_key(const StreamKey& key) {
  if (key.size_index >= (1u << 24)) throw std::domain_error("StreamKey: size_index out of range");
  if (key.trial_index >= (1ULL << 39)) throw std::domain_error("StreamKey: trial_index out of range");
  if (key.group_index > 1) throw std::domain_error("StreamKey: group_index must be 0 or 1");
  return (static_cast<std::uint64_t>(key.size_index) << 40)
         | (key.trial_index << 1)
         | static_cast<std::uint64_t>(key.group_index);
}

} // namespace detail

// Derived stream seeds are a pure function of (master, key). The master is
// finalized before it meets the packed key: XORing the raw master would let
// nearby masters relabel each other's (trial, group) cells and share streams.
// Within one master the packing is injective and the finalizer bijective, so
// distinct keys can never collide.
inline Seed derive_stream(Seed master, const StreamKey& key) {
  return detail::mix64(detail::pack_key(key) ^ detail::mix64(master));
}

// SplitMix64 counter generator with Box-Muller normal sampling. A pair of
// normal deviates consumes exactly two uniforms; the second deviate is cached
// and consumed before any new generation, so streams stay countable.
class Rng {
 public:
  explicit Rng(Seed seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return detail::mix64(state_);
  }

  // 53-bit-precision uniform in [0, 1)
  double next_uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_normal(double mean, double sd) {
    if (!(sd > 0.0)) throw std::domain_error("next_normal: sd must be > 0");
    if (has_cached_) {
      has_cached_ = false;
      return mean + sd * cached_;
    }
    const double u1 = next_uniform01();
    const double u2 = next_uniform01();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1)); // 1-u1 in (0,1], log finite
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return mean + sd * radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

} // namespace sigsim
