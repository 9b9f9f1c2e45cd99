#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nodag {

/// Seed for every randomized component in the library.
struct RngSeed {
  std::uint64_t seed = 0;
};

// splitmix64 finalizer, used to derive independent child seeds from a
// master seed plus arbitrary tag words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr RngSeed derive_seed(RngSeed base, std::uint64_t tag) {
  return RngSeed{mix64(base.seed ^ mix64(tag))};
}

/// Deterministic random stream. std::mt19937_64 is fully specified by the
/// standard, and the draw methods below avoid std::*_distribution (whose
/// output is implementation-defined), so a given seed reproduces the same
/// stream on any platform.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal deviate (Marsaglia polar method).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  /// Exponential with rate 1.
  double exponential() { return -std::log1p(-uniform01()); }

  /// Uniform integer in [0, n), n >= 1; rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nodag
