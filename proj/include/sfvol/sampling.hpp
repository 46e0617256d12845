#pragma once

#include <cmath>
#include <string>

#include "sfvol/error.hpp"
#include "sfvol/rng.hpp"

namespace sfvol {

/// Gamma law in the rate convention: f(x) = b^a / Gamma(a) x^(a-1) e^(-b x).
struct GammaParams {
  double shape;
  double rate;

  double scale() const { return 1.0 / rate; }
  double mean() const { return shape / rate; }
  double variance() const { return shape / (rate * rate); }
  void validate() const;
};

inline double sample_standard_normal(Rng& rng) noexcept { return rng.standard_normal(); }

namespace detail {

// Marsaglia & Tsang (2000) squeeze/rejection for unit-rate Gamma(shape), shape >= 1.
// Expected iterations stay below ~1.05 for every shape, including 1e8 and beyond.
inline double gamma_unit_large(double shape, Rng& rng) noexcept {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double gamma_unit(double shape, Rng& rng) noexcept {
  if (shape >= 1.0) return gamma_unit_large(shape, rng);
  // Shape boosting: G(a) = G(a + 1) * U^(1/a).
  const double g = gamma_unit_large(shape + 1.0, rng);
  return g * std::exp(std::log(rng.uniform()) / shape);
}

}  // namespace detail

inline double sample_gamma(const GammaParams& p, Rng& rng) {
  p.validate();
  return detail::gamma_unit(p.shape, rng) / p.rate;
}

inline double sample_normal(double mean, double sd, Rng& rng) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || !(sd > 0.0))
    throw DomainError("sample_normal: need finite mean and sd > 0, got mean=" +
                      std::to_string(mean) + " sd=" + std::to_string(sd));
  return mean + sd * sample_standard_normal(rng);
}

inline double sample_exponential(double rate, Rng& rng) {
  if (!std::isfinite(rate) || !(rate > 0.0))
    throw DomainError("sample_exponential: rate must be finite and > 0, got " +
                      std::to_string(rate));
  return -std::log(rng.uniform()) / rate;
}

}  // namespace sfvol
