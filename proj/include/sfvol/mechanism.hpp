#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sfvol/model.hpp"
#include "sfvol/rng.hpp"

namespace sfvol {

/// Poisson-rate estimation mechanism behind the variance recursion.
///
/// Participants watch an exogenous Poisson process of rate `lambda_e`
/// (events/day). After M(t) = 1 + A / sigma_{t-1}^2 events, which take
/// tau ~ Gamma(M, lambda_e) days, they estimate the rate as M / tau and the
/// daily variance becomes delta^2 N / tau. Only the product delta^2 N is kept.
struct MechanismParams {
  double lambda_e = 101.0;
  double sigma0_sq = 1e-4;
  double A = 1e-2;
  double delta_sq_N = 1e-4;

  /// Equilibrium closure: A = sigma0^2 (lambda_e - 1) and delta^2 N = sigma0^2.
  static MechanismParams from_closure(double lambda_e, double sigma0_sq);
  /// Closure with lambda_e = B + 1.
  static MechanismParams from_model(const ModelParams& model);

  bool closure_holds(double rel_tol = 1e-12) const;
  void validate() const;
};

struct MechanismStep {
  double M = 1.0;             // exogenous events in the observation window
  double tau = 0.0;           // days taken by those events
  double lambda_hat_e = 0.0;  // estimated exogenous rate, M / tau
  double lambda_t = 0.0;      // price-fluctuation rate in units where delta = 1, N / tau
  double var = 0.0;           // sigma_t^2 = delta^2 N / tau
};

MechanismStep mech_step(double prev_var, const MechanismParams& p, Rng& rng);

/// Demonstration variant: M rounded to the nearest integer >= 1 and tau built
/// as a sum of M exponential inter-arrival times.
MechanismStep mech_step_integer_events(double prev_var, const MechanismParams& p, Rng& rng);

struct ReductionOptions {
  std::size_t burn_in = kDefaultBurnIn;
  std::size_t thin = 0;                   // 0: decorrelation_lag(B)
  std::optional<double> lambda_e;         // override; A and delta^2 N stay at the model closure
  int acf_max_lag = 50;
};

struct ReductionReport {
  double lambda_e = 0.0;
  std::size_t samples = 0;
  std::size_t thin = 0;
  double ks_statistic = 0.0;
  double ks_p_value = 0.0;
  std::vector<double> acf_abs_diff;  // |ACF_mech(k) - ACF_model(k)| of |r|, k = 1..acf_max_lag
  double max_acf_abs_diff = 0.0;
};

/// Runs the mechanism chain and the reduced recursion side by side on
/// independent substreams and compares their stationary variances.
ReductionReport verify_reduction(const ModelParams& model, std::size_t T, Rng& rng,
                                 const ReductionOptions& options = {});

}  // namespace sfvol
