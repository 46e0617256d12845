#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sfvol/rng.hpp"

namespace sfvol {

/// Parameters of the feedback volatility model.
///
/// `sigma0_sq` is the equilibrium variance (the inverse of the equilibrium
/// inverse variance), `B` the feedback strength and `mu` the daily drift.
struct ModelParams {
  double sigma0_sq = 1e-4;
  double B = 100.0;
  double mu = 0.0;

  void validate() const;
};

/// Daily variances and returns, index aligned.
struct PathSample {
  std::vector<double> variance;
  std::vector<double> returns;

  std::size_t size() const { return returns.size(); }
};

/// Scale-free view of a path: r' = (r(dt) - mu dt) / (sigma0 sqrt(dt)),
/// sigma' = sigma / sigma0, beta' = sigma0^2 / sigma^2.
/// r_prime has one entry per aggregated block; the other two are daily.
struct NormalizedSeries {
  std::vector<double> r_prime;
  std::vector<double> sigma_prime;
  std::vector<double> beta_prime;
  int delta_t = 1;
};

inline constexpr std::size_t kDefaultBurnIn = 10'000;

/// One step of the normalized recursion: beta_t ~ Gamma(1 + B beta_{t-1}, 1 + B).
/// beta is sigma0^2 / sigma^2, so the variance recursion follows by inversion.
double step_beta(double prev_beta, double B, Rng& rng);

/// sigma_t^2 = sigma0^2 / Gamma(1 + B sigma0^2 / prev_var, 1 + B).
double step_variance(double prev_var, const ModelParams& params, Rng& rng);

/// Runs burn_in + T steps from init_var and keeps the last T.
/// Each step draws the gamma variate first, then the normal innovation.
PathSample generate_path(const ModelParams& params, std::size_t T, double init_var,
                         std::size_t burn_in, Rng& rng);

inline PathSample generate_path(const ModelParams& params, std::size_t T, Rng& rng) {
  return generate_path(params, T, params.sigma0_sq, kDefaultBurnIn, rng);
}

/// Lag-k autocorrelation of beta is exactly (B / (1 + B))^k. Returns the
/// smallest k with that correlation at or below `max_corr`.
std::size_t decorrelation_lag(double B, double max_corr = 0.01);

/// n draws from the stationary law of beta', spaced `thin` steps apart
/// (0 picks decorrelation_lag(B)).
std::vector<double> sample_stationary_beta(double B, std::size_t n, std::size_t thin,
                                           std::size_t burn_in, Rng& rng);

/// Non-overlapping block sums of daily log returns; a trailing partial block is dropped.
std::vector<double> aggregate_returns(std::span<const double> daily, int delta_t);

NormalizedSeries normalize(const PathSample& path, const ModelParams& params, int delta_t);

}  // namespace sfvol
