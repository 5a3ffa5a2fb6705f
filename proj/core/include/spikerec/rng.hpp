#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace spikerec {

/// Seeded random source with portable conversions.
///
/// std::mt19937_64 output is specified bit-for-bit by the standard; the
/// distribution helpers below avoid std::uniform_real_distribution and
/// friends, whose output is implementation defined. Same seed, same stream,
/// on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive, rejection-sampled (no modulo bias).
  std::uint64_t uniform_index(std::uint64_t span) {
    // span values in [0, span)
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % span;
  }

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniformly random point on the complex unit circle.
  std::complex<double> unit_phase() {
    const double theta = 6.283185307179586476925286766559 * uniform();
    return {std::cos(theta), std::sin(theta)};
  }

  /// Standard normal via Box-Muller (deterministic, caches the spare value).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stateless per-index seed derivation (splitmix64 finalizer over master ^ f(index)).
/// Used wherever a family of independent streams hangs off one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace spikerec
