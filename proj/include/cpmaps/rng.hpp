/** @file
 * Seeded, reproducible sampling primitives. The engine is std::mt19937_64
 * (its output sequence is pinned by the standard); uniform and Gaussian
 * variates are derived from raw engine words with fixed arithmetic, so a
 * seed produces the same stream on every conforming standard library.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace cpmaps::rng {

using Seed = std::uint64_t;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for trial `index`; disjoint streams for independent draws.
inline Seed derive(Seed seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 1));
}

class Prng {
 public:
  explicit Prng(Seed seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1) with 53 significant bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (pairs cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Prng::below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Fisher-Yates shuffle of 0..n-1.
inline std::vector<int> permutation(int n, Prng& prng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(prng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

/// Uniform point on the probability simplex (normalized exponentials).
inline std::vector<double> simplex_weights(int k, Prng& prng) {
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& wi : w) {
    wi = -std::log(1.0 - prng.uniform());
    total += wi;
  }
  for (auto& wi : w) wi /= total;
  return w;
}

}  // namespace cpmaps::rng
