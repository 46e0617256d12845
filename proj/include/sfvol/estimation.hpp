#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sfvol/model.hpp"
#include "sfvol/rng.hpp"
#include "sfvol/stats.hpp"

namespace sfvol {

inline constexpr int kDefaultWindow = 42;

/// Centered rolling-window variance estimates.
///
/// values[k] is the estimate centered on return index first + k, built from
/// returns first + k - window/2 ... first + k + window/2 - 1 (for window 42:
/// offsets -21 ... 20).
struct VarianceSeries {
  std::vector<double> values;
  std::size_t first = 0;
  int window = kDefaultWindow;

  std::size_t size() const { return values.size(); }
  std::size_t end() const { return first + values.size(); }
  // true when some estimate is zero, which breaks inversion downstream
  bool degenerate() const;
};

/// Mean is the full-sample mean of `returns`; each window sum is divided by
/// `window`, not window - 1.
VarianceSeries rolling_variance(std::span<const double> returns, int window = kDefaultWindow);

/// sigma0^2 estimate: the inverse of the mean inverse variance.
double estimate_sigma0(std::span<const double> variances);
inline double estimate_sigma0(const VarianceSeries& vars) { return estimate_sigma0(vars.values); }

/// Sum over t of e_t^2 with
/// e_t = 1/v_t - (1 + B s0 / v_{t-1}) / ((1 + B) s0).
double b_objective(std::span<const double> variances, double sigma0_sq, double B);

struct BEstimate {
  double B = 0.0;
  double objective = 0.0;
  std::vector<double> local_minima;  // every interior or boundary minimum found, ascending B
  bool at_boundary = false;
};

inline constexpr double kBMin = 1.0;
inline constexpr double kBMax = 1e6;

/// Least-squares B by golden-section search on log B over [1, 1e6] to 1e-3 in
/// log B. A coarse scan runs first; each local minimum it brackets is refined
/// and all of them are reported.
BEstimate estimate_B(std::span<const double> variances, double sigma0_sq);
inline BEstimate estimate_B(const VarianceSeries& vars, double sigma0_sq) {
  return estimate_B(vars.values, sigma0_sq);
}

/// The estimation pipeline shared by data and simulated predictions:
/// rolling variance, then sigma0^2 from the same estimates, then beta'.
struct BetaPipeline {
  VarianceSeries variances;
  double sigma0_sq = 0.0;
  std::vector<double> beta_prime;
};

BetaPipeline beta_prime_pipeline(std::span<const double> returns, int window = kDefaultWindow);

enum class Family { gamma, model_predicted, garch_predicted, lognormal, inverse_gamma };

std::string family_name(Family f);

struct NamedParam {
  std::string name;
  double value;
};

struct FitResult {
  Family family = Family::gamma;
  std::vector<NamedParam> params;
  GofResult gof;
  std::size_t n = 0;

  double param(const std::string& name) const;
};

/// Gamma MLE; params shape, rate and scale (= 1 / rate).
FitResult fit_gamma(std::span<const double> samples);
/// Lognormal MLE; params mu, sigma of log x.
FitResult fit_lognormal(std::span<const double> samples);
/// Inverse-gamma MLE, density b^a / Gamma(a) x^(-a-1) e^(-b/x); params shape,
/// scale (= b) and rate (= 1 / b).
FitResult fit_invgamma(std::span<const double> samples);

/// Chi-square test of `samples` against the empirical law of a simulated
/// `predicted` sample.
FitResult compare_to_prediction(std::span<const double> samples,
                                std::span<const double> predicted, Family family,
                                std::vector<NamedParam> params, int fitted_param_count);

/// Simulates the model and returns beta' after the rolling-window pipeline.
std::vector<double> model_predicted_beta_dist(const ModelParams& params, std::size_t T,
                                              int window, Rng& rng,
                                              std::size_t burn_in = kDefaultBurnIn);

struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  int lag_min = 0;
  int lag_max = 0;  // after any range reduction
  std::vector<double> residuals;
  double curvature = 0.0;    // quadratic coefficient of log C against log lag
  double curvature_t = 0.0;  // its t statistic
  std::vector<std::string> warnings;
};

/// Least squares of log C(k) = log c - gamma log k over lags [lag_min, lag_max].
/// `acf_values[0]` is lag 1.
PowerLawFit fit_powerlaw_acf(std::span<const double> acf_values, int lag_min, int lag_max);

}  // namespace sfvol
