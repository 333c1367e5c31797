#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace colearn {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Every consumer of randomness draws from its own stream, seeded by
// (base, domain tag, indices...). Rerunning any unit of work reproduces it
// bit-identically regardless of what ran before or concurrently.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t seed = mix64(base);
  for (std::uint64_t part : parts) {
    seed = mix64(seed ^ mix64(part));
  }
  return seed;
}

template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t base, Parts... parts) noexcept {
  return derive_seed(base, {static_cast<std::uint64_t>(parts)...});
}

// Seed domains.
inline constexpr std::uint64_t kSeedInit = 0x01;
inline constexpr std::uint64_t kSeedLocalTrain = 0x02;
inline constexpr std::uint64_t kSeedBlobs = 0x03;
inline constexpr std::uint64_t kSeedXorRings = 0x04;
inline constexpr std::uint64_t kSeedPartition = 0x05;
inline constexpr std::uint64_t kSeedHoldout = 0x06;

// mt19937_64 with hand-rolled output transforms. The standard library's
// distributions and std::shuffle are implementation-defined, so uniform,
// normal and shuffle are spelled out here; streams stay identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second deviate of each pair is
  // cached and returned on the next call.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * uniform();
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return radius * std::cos(theta);
  }

  // Unbiased integer in [0, bound); bound must be >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace colearn
