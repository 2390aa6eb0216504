#pragma once

// deterministic sampling on top of std::mt19937_64.  the standard library
// distributions are not bit-stable across implementations, so the few
// distributions needed here are written out explicitly; a fixed seed then
// produces identical streams on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace bmdp {

using rng_t = std::mt19937_64;

// uniform double in [0, 1) built from the top 53 bits of one draw
inline double uniform01(rng_t& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// unbiased uniform integer in [0, n) by rejection
inline std::uint64_t uniform_below(rng_t& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
  const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
  std::uint64_t x = rng();
  while (x < rem) x = rng();
  return x % n;
}

// standard normal via Box-Muller; consumes exactly two uniform draws
inline double sample_normal(rng_t& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1], keeps the log finite
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

inline double sample_normal(rng_t& rng, double mean, double sd) {
  return mean + sd * sample_normal(rng);
}

// gamma(alpha, 1) by the Marsaglia-Tsang squeeze; alpha < 1 uses the boost
// gamma(alpha) = gamma(alpha + 1) * u^(1/alpha)
inline double sample_gamma(rng_t& rng, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sample_gamma: alpha must be positive");
  if (alpha < 1.0) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    return sample_gamma(rng, alpha + 1.0) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// dirichlet draw: independent gammas normalized to the simplex
inline std::vector<double> sample_dirichlet(rng_t& rng, const std::vector<double>& alpha) {
  std::vector<double> g(alpha.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    g[i] = sample_gamma(rng, alpha[i]);
    total += g[i];
  }
  if (total <= 0.0) throw std::runtime_error("sample_dirichlet: degenerate draw");
  for (double& x : g) x /= total;
  return g;
}

}  // namespace bmdp
