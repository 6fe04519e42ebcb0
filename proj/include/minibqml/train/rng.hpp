#pragma once

#include <cstdint>
#include <random>

namespace minibqml::train {

/// Seeded generator with platform-independent derived distributions
/// (std::uniform_*_distribution output varies between standard libraries).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0, by rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-limit, limit).
  double symmetric(double limit) { return (2.0 * unit() - 1.0) * limit; }

  template <class It> void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      std::uint64_t j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

} // namespace minibqml::train
