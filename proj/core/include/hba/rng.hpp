#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace hba {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of an independent stream derived from a root seed.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return mix64(mix64(root) ^ mix64(stream * 0xD1B54A32D192ED03ULL + 1));
}

// Well-known stream ids. Controllers use kController + player index.
enum class Stream : std::uint64_t {
  kTypes = 1,
  kTransitions = 2,
  kScenario = 3,
  kDistributionChoice = 4,
  kController = 64,
};

constexpr std::uint64_t derive_seed(std::uint64_t root, Stream stream,
                                    std::uint64_t offset = 0) {
  return derive_seed(root, static_cast<std::uint64_t>(stream) + offset);
}

// Portable helpers over mt19937_64; the std distributions are avoided so that
// draws are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n).
  std::size_t index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform in [lo, hi].
  int range(int lo, int hi) {
    return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Index drawn proportionally to `weights` (need not be normalized).
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform() * total;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] <= 0.0) continue;
      last_positive = k;
      if (r < weights[k]) return k;
      r -= weights[k];
    }
    return last_positive;
  }

  double gaussian() {
    // Box-Muller; one draw per call keeps the stream stateless.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hba
