#pragma once
// Deterministic random streams: std::mt19937_64 plus fixed sampling
// algorithms.  The <random> distribution classes are implementation-defined,
// so seeded results would differ between standard libraries; the samplers
// here pin the exact algorithm, making every (seed, config) pair produce the
// same stream on any platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vertiflow {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  // Uniform draw in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform draw in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with the given rate (mean 1/rate); strictly positive.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Standard normal via Box-Muller; consumes two uniforms per pair and
  // caches the second value.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Lognormal with log-space location mu and spread sigma.
  double lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Splitmix64 finalizer: turns (base seed, stream index) into a decorrelated
// seed for an independent sub-stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace vertiflow
