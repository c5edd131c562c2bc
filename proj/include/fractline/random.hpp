#pragma once

#include <cstdint>

namespace fractline {

/// SplitMix64 (Steele, Lea & Flood 2014). Counter-based: the k-th output is a
/// pure function of (seed, k), so streams can be split and replayed
/// identically on any platform. This is the only generator the library uses;
/// every published number that depends on randomness is reproducible from a
/// 64-bit seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1). 53 mantissa bits, never returns 1.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n). Fixed-point multiply; bias is O(n / 2^64).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
  }

  /// Seed for an independent child stream. Pure in (seed, stream), so work
  /// split across streams is order-independent.
  static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    return g.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace fractline
