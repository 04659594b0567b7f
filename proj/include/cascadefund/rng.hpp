#pragma once

#include <cstdint>

namespace cascadefund {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based SplitMix64 stream.  Draw k of stream (seed, run) is
// mix(key + (k + 1) * golden) with key = mix(seed) ^ mix(run + golden), so any
// run can be replayed without touching the others.
class Splitmix64Stream {
 public:
  Splitmix64Stream(std::uint64_t seed, std::uint64_t run)
      : key_(splitmix64_mix(seed) ^ splitmix64_mix(run + kGolden)) {}

  std::uint64_t next() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGolden);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline constexpr const char* kGeneratorName = "splitmix64-counter";

}  // namespace cascadefund
