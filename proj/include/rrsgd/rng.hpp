#pragma once

#include <cstdint>

namespace rrsgd {

// Counter-based deterministic generator (splitmix64). All state transitions
// are integer-only, so streams are bit-identical across platforms, unlike
// std::mt19937 + std::shuffle / std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

  // Independent substream for (seed, stream), e.g. one stream per epoch.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Modulo bias is ~n/2^64, negligible here.
  std::uint64_t bounded(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller (polar-free form, fully deterministic).
  double normal();

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
  }

  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace rrsgd
