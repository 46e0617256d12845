#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sfvol/model.hpp"
#include "sfvol/optimize.hpp"
#include "sfvol/rng.hpp"

namespace sfvol {

/// sigma_t^2 = omega + alpha r_{t-1}^2 + beta sigma_{t-1}^2, Gaussian innovations.
struct GarchParams {
  double omega = 1.3e-6;
  double beta = 0.90;   // sigma_{t-1}^2 coefficient
  double alpha = 0.089; // r_{t-1}^2 coefficient

  double persistence() const { return alpha + beta; }
  double unconditional_variance() const { return omega / (1.0 - alpha - beta); }
  void validate() const;
};

struct GarchFit {
  GarchParams params;
  double log_likelihood = 0.0;
  int iterations = 0;
  int restarts = 0;
};

/// Zero-mean GARCH(1,1) returns started at the unconditional variance.
std::vector<double> simulate_garch(const GarchParams& g, std::size_t T, Rng& rng,
                                   std::size_t burn_in = kDefaultBurnIn);

/// Gaussian log-likelihood of demeaned returns; the recursion starts at the
/// sample variance.
double garch_log_likelihood(std::span<const double> returns, const GarchParams& g);

/// Gaussian quasi-MLE. omega, the persistence alpha + beta and the share
/// alpha / (alpha + beta) are mapped through exp / logistic / logistic so that
/// every simplex point is a stationary model. Throws NumericalError with a
/// trace when the simplex fails to converge.
GarchFit fit_garch11(std::span<const double> returns, const SimplexOptions& options = {});

/// GARCH(1,1) returns pushed through the rolling-window beta' pipeline.
std::vector<double> garch_predicted_beta_dist(const GarchParams& g, std::size_t T, int window,
                                              Rng& rng, std::size_t burn_in = kDefaultBurnIn);

}  // namespace sfvol
