#include "sfvol/mechanism.hpp"

#include <cmath>
#include <sstream>

#include "sfvol/error.hpp"
#include "sfvol/sampling.hpp"
#include "sfvol/stats.hpp"

namespace sfvol {

MechanismParams MechanismParams::from_closure(double lambda_e, double sigma0_sq) {
  MechanismParams p;
  p.lambda_e = lambda_e;
  p.sigma0_sq = sigma0_sq;
  p.A = sigma0_sq * (lambda_e - 1.0);
  p.delta_sq_N = sigma0_sq;
  p.validate();
  return p;
}

MechanismParams MechanismParams::from_model(const ModelParams& model) {
  model.validate();
  return from_closure(model.B + 1.0, model.sigma0_sq);
}

bool MechanismParams::closure_holds(double rel_tol) const {
  const double a = sigma0_sq * (lambda_e - 1.0);
  return std::abs(A - a) <= rel_tol * std::abs(a) &&
         std::abs(delta_sq_N - sigma0_sq) <= rel_tol * sigma0_sq;
}

void MechanismParams::validate() const {
  std::ostringstream msg;
  if (!(std::isfinite(lambda_e) && lambda_e > 1.0)) msg << "lambda_e must be > 1; ";
  if (!(std::isfinite(sigma0_sq) && sigma0_sq > 0.0)) msg << "sigma0_sq must be > 0; ";
  if (!(std::isfinite(A) && A > 0.0)) msg << "A must be > 0; ";
  if (!(std::isfinite(delta_sq_N) && delta_sq_N > 0.0)) msg << "delta_sq_N must be > 0; ";
  if (const auto s = msg.str(); !s.empty()) throw DomainError("MechanismParams: " + s);
}

namespace {

void check_prev_var(double prev_var) {
  if (!(std::isfinite(prev_var) && prev_var > 0.0)) {
    std::ostringstream msg;
    msg << "mechanism step: prev_var must be finite and > 0, got " << prev_var;
    throw DomainError(msg.str());
  }
}

MechanismStep finish_step(double M, double tau, const MechanismParams& p) {
  MechanismStep s;
  s.M = M;
  s.tau = tau;
  s.lambda_hat_e = M / tau;
  s.lambda_t = p.delta_sq_N / tau;
  s.var = p.delta_sq_N / tau;
  return s;
}

}  // namespace

MechanismStep mech_step(double prev_var, const MechanismParams& p, Rng& rng) {
  check_prev_var(prev_var);
  const double M = 1.0 + p.A / prev_var;
  const double tau = sample_gamma({M, p.lambda_e}, rng);
  return finish_step(M, tau, p);
}

MechanismStep mech_step_integer_events(double prev_var, const MechanismParams& p, Rng& rng) {
  check_prev_var(prev_var);
  const double M = std::max(1.0, std::round(1.0 + p.A / prev_var));
  if (M > 1e7) throw DomainError("mech_step_integer_events: too many events to sum explicitly");
  double tau = 0.0;
  for (long k = 0; k < static_cast<long>(M); ++k) tau += sample_exponential(p.lambda_e, rng);
  return finish_step(M, tau, p);
}

namespace {

struct ChainOutput {
  std::vector<double> thinned_var;
  std::vector<double> abs_returns;
};

template <typename Step>
ChainOutput run_chain(double start_var, std::size_t burn_in, std::size_t T, std::size_t thin,
                      Rng& rng, Step step) {
  double var = start_var;
  for (std::size_t i = 0; i < burn_in; ++i) var = step(var, rng);
  ChainOutput out;
  out.thinned_var.reserve(T);
  out.abs_returns.reserve(T);
  for (std::size_t i = 0; i < T * thin; ++i) {
    var = step(var, rng);
    if (i < T) out.abs_returns.push_back(std::abs(std::sqrt(var) * rng.standard_normal()));
    if ((i + 1) % thin == 0) out.thinned_var.push_back(var);
  }
  return out;
}

}  // namespace

ReductionReport verify_reduction(const ModelParams& model, std::size_t T, Rng& rng,
                                 const ReductionOptions& options) {
  model.validate();
  if (T < 4 * static_cast<std::size_t>(options.acf_max_lag) + 1)
    throw DomainError("verify_reduction: T too small for the requested ACF lags");
  MechanismParams mech = MechanismParams::from_model(model);
  if (options.lambda_e) {
    mech.lambda_e = *options.lambda_e;
    mech.validate();
  }
  const std::size_t thin = options.thin == 0 ? decorrelation_lag(model.B) : options.thin;

  auto streams = rng.split(2);
  const ChainOutput via_mechanism =
      run_chain(model.sigma0_sq, options.burn_in, T, thin, streams[0],
                [&](double v, Rng& r) { return mech_step(v, mech, r).var; });
  const ChainOutput via_model =
      run_chain(model.sigma0_sq, options.burn_in, T, thin, streams[1],
                [&](double v, Rng& r) { return step_variance(v, model, r); });

  ReductionReport report;
  report.lambda_e = mech.lambda_e;
  report.samples = T;
  report.thin = thin;
  const KsResult ks = ks_two_sample(via_mechanism.thinned_var, via_model.thinned_var);
  report.ks_statistic = ks.statistic;
  report.ks_p_value = ks.p_value;

  const AcfResult a = acf(via_mechanism.abs_returns, options.acf_max_lag);
  const AcfResult b = acf(via_model.abs_returns, options.acf_max_lag);
  report.acf_abs_diff.resize(a.values.size());
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    report.acf_abs_diff[k] = std::abs(a.values[k] - b.values[k]);
    report.max_acf_abs_diff = std::max(report.max_acf_abs_diff, report.acf_abs_diff[k]);
  }
  return report;
}

}  // namespace sfvol
