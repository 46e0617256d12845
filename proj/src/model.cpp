#include "sfvol/model.hpp"

#include <cmath>
#include <sstream>

#include "sfvol/error.hpp"
#include "sfvol/sampling.hpp"

namespace sfvol {

void ModelParams::validate() const {
  std::ostringstream msg;
  if (!(std::isfinite(sigma0_sq) && sigma0_sq > 0.0))
    msg << "sigma0_sq must be finite and > 0 (got " << sigma0_sq << "); ";
  if (!(std::isfinite(B) && B > 1.0)) msg << "B must be finite and > 1 (got " << B << "); ";
  if (!std::isfinite(mu)) msg << "mu must be finite (got " << mu << "); ";
  if (const auto s = msg.str(); !s.empty()) throw DomainError("ModelParams: " + s);
}

double step_beta(double prev_beta, double B, Rng& rng) {
  if (!(std::isfinite(prev_beta) && prev_beta > 0.0)) {
    std::ostringstream msg;
    msg << "step_beta: previous inverse variance must be finite and > 0, got " << prev_beta;
    throw DomainError(msg.str());
  }
  const double shape = 1.0 + B * prev_beta;
  if (!std::isfinite(shape)) {
    std::ostringstream msg;
    msg << "step_beta: gamma shape overflow (B=" << B << ", sigma0^2/prev_var=" << prev_beta
        << ")";
    throw DomainError(msg.str());
  }
  return detail::gamma_unit(shape, rng) / (1.0 + B);
}

double step_variance(double prev_var, const ModelParams& params, Rng& rng) {
  if (!(std::isfinite(prev_var) && prev_var > 0.0)) {
    std::ostringstream msg;
    msg << "step_variance: prev_var must be finite and > 0, got " << prev_var;
    throw DomainError(msg.str());
  }
  const double var = params.sigma0_sq / step_beta(params.sigma0_sq / prev_var, params.B, rng);
  if (!(std::isfinite(var) && var > 0.0))
    throw NumericalError("step_variance: produced a non-finite variance");
  return var;
}

PathSample generate_path(const ModelParams& params, std::size_t T, double init_var,
                         std::size_t burn_in, Rng& rng) {
  params.validate();
  if (T == 0) throw DomainError("generate_path: T must be >= 1");
  if (!(std::isfinite(init_var) && init_var > 0.0))
    throw DomainError("generate_path: init_var must be finite and > 0");

  double beta = params.sigma0_sq / init_var;
  for (std::size_t i = 0; i < burn_in; ++i) {
    beta = step_beta(beta, params.B, rng);
    rng.standard_normal();
  }

  PathSample path;
  path.variance.resize(T);
  path.returns.resize(T);
  const double sigma0 = std::sqrt(params.sigma0_sq);
  for (std::size_t t = 0; t < T; ++t) {
    beta = step_beta(beta, params.B, rng);
    const double xi = rng.standard_normal();
    path.variance[t] = params.sigma0_sq / beta;
    path.returns[t] = params.mu + sigma0 * (xi / std::sqrt(beta));
  }
  return path;
}

std::size_t decorrelation_lag(double B, double max_corr) {
  if (!(B > 1.0)) throw DomainError("decorrelation_lag: B must be > 1");
  if (!(max_corr > 0.0 && max_corr < 1.0))
    throw DomainError("decorrelation_lag: max_corr must lie in (0, 1)");
  const double k = std::log(max_corr) / std::log(B / (1.0 + B));
  return static_cast<std::size_t>(std::ceil(k));
}

std::vector<double> sample_stationary_beta(double B, std::size_t n, std::size_t thin,
                                           std::size_t burn_in, Rng& rng) {
  if (!(std::isfinite(B) && B > 1.0)) throw DomainError("sample_stationary_beta: B must be > 1");
  if (thin == 0) thin = decorrelation_lag(B);
  double beta = 1.0;
  for (std::size_t i = 0; i < burn_in; ++i) beta = step_beta(beta, B, rng);
  std::vector<double> out(n);
  for (auto& x : out) {
    for (std::size_t k = 0; k < thin; ++k) beta = step_beta(beta, B, rng);
    x = beta;
  }
  return out;
}

std::vector<double> aggregate_returns(std::span<const double> daily, int delta_t) {
  if (delta_t < 1) throw DomainError("aggregate_returns: delta_t must be >= 1");
  const std::size_t dt = static_cast<std::size_t>(delta_t);
  std::vector<double> out;
  out.reserve(daily.size() / dt);
  for (std::size_t start = 0; start + dt <= daily.size(); start += dt) {
    double sum = 0.0;
    for (std::size_t i = start; i < start + dt; ++i) sum += daily[i];
    out.push_back(sum);
  }
  return out;
}

NormalizedSeries normalize(const PathSample& path, const ModelParams& params, int delta_t) {
  if (path.variance.size() != path.returns.size())
    throw DomainError("normalize: variance and returns differ in length");
  if (!(params.sigma0_sq > 0.0)) throw DomainError("normalize: sigma0_sq must be > 0");
  NormalizedSeries out;
  out.delta_t = delta_t;
  const double sigma0 = std::sqrt(params.sigma0_sq);
  const double denom = sigma0 * std::sqrt(static_cast<double>(delta_t));
  const double drift = params.mu * delta_t;
  out.r_prime = aggregate_returns(path.returns, delta_t);
  for (double& r : out.r_prime) r = (r - drift) / denom;

  out.sigma_prime.resize(path.size());
  out.beta_prime.resize(path.size());
  for (std::size_t t = 0; t < path.size(); ++t) {
    const double v = path.variance[t];
    if (!(std::isfinite(v) && v > 0.0)) throw DomainError("normalize: non-positive variance");
    out.beta_prime[t] = params.sigma0_sq / v;
    out.sigma_prime[t] = std::sqrt(v) / sigma0;
  }
  return out;
}

}  // namespace sfvol
