#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sprayeval/errors.hpp"

namespace sprayeval {

// Deterministic random source for the synthetic-data generators and the
// dataset splitter.
//
// The engine is std::mt19937_64, whose output sequence is fully pinned by the
// standard, and every derived quantity (bounded integers, unit reals, Poisson
// counts, shuffles) is implemented here instead of with std::*_distribution,
// whose outputs differ between standard libraries. A given seed therefore
// yields the same stream on every platform, which keeps committed fixtures
// reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n). Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw ValidationError("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  // Uniform integer in [lo, hi], both ends inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw ValidationError("Rng::uniform_int: hi < lo");
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform real in [0, 1), 53-bit resolution.
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform_real() < p; }

  // Knuth's product method; adequate for the small means used here.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = -1;
    double prod = 1.0;
    do {
      ++k;
      prod *= uniform_real();
    } while (prod > limit);
    return k;
  }

  // Fisher-Yates, driven by below() rather than std::shuffle.
  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::swap(xs[i - 1], xs[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent per-item seed (one splitmix64 round over base +
// index). Generators seed one Rng per image with this, so per-image output
// is a pure function of (base seed, image index) and images may be produced
// in any order or in parallel without changing the result.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace sprayeval
