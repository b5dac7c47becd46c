#pragma once

#include <cstdint>

namespace cliquelab {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function (Stafford variant 13).
constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Mixes two 64-bit keys into a new stream key. Not symmetric in (a, b).
constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix_finalize(a ^ splitmix_finalize(b + kGoldenGamma));
}

// Counter-based stream: the k-th output is finalize(key + (k+1) * gamma), so
// any position can be reproduced from (key, k) alone.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return splitmix_finalize(key_ + (++counter_) * kGoldenGamma); }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cliquelab
