#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace optimseed::rng {

// SplitMix64 finalizer. Used to derive independent stream seeds from one
// base seed so that multi-chain / subsampling streams never overlap.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix(base ^ mix(stream + 1));
}

// mt19937_64 plus hand-rolled distributions. The engine is fully specified
// by the standard; std::*_distribution is not, so sampling here stays
// bit-reproducible across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1); rejects exact zero.
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller (no cached second value, so the stream
  // position is a pure function of the number of calls made).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang; boosted for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return d * v;
      }
    }
  }

  // Beta(a, b) from two gammas, clamped away from {0, 1} so downstream
  // log() calls stay finite.
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    double r = (x + y > 0.0) ? x / (x + y) : 0.5;
    const double eps = 1e-12;
    if (r < eps) r = eps;
    if (r > 1.0 - eps) r = 1.0 - eps;
    return r;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace optimseed::rng
