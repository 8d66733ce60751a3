#pragma once

#include <cstdint>

namespace cuckoo_lab {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// The splitmix64 output function; a bijection on 64-bit values.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next() {
    state_ += kGoldenGamma;
    return splitmix64_mix(state_);
  }

  // Unbiased draw from [0, bound) by rejecting the low 2^64 mod bound values.
  constexpr std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Starting state for one (seed, stream) pair. For a fixed seed the map from
// stream to state is a bijection, so distinct streams never share a state.
constexpr std::uint64_t derive_state(RngSeed s) {
  return splitmix64_mix(s.seed) ^ splitmix64_mix(s.stream * kGoldenGamma + kGoldenGamma);
}

}  // namespace cuckoo_lab
