#include "sfvol/garch.hpp"

#include <cmath>
#include <sstream>

#include "sfvol/error.hpp"
#include "sfvol/estimation.hpp"
#include "sfvol/stats.hpp"

namespace sfvol {

void GarchParams::validate() const {
  std::ostringstream msg;
  if (!(std::isfinite(omega) && omega > 0.0)) msg << "omega must be > 0; ";
  if (!(alpha >= 0.0 && alpha < 1.0)) msg << "alpha must lie in [0, 1); ";
  if (!(beta >= 0.0 && beta < 1.0)) msg << "beta must lie in [0, 1); ";
  if (!(alpha + beta < 1.0)) msg << "alpha + beta must be < 1; ";
  if (const auto s = msg.str(); !s.empty()) throw DomainError("GarchParams: " + s);
}

std::vector<double> simulate_garch(const GarchParams& g, std::size_t T, Rng& rng,
                                   std::size_t burn_in) {
  g.validate();
  double h = g.unconditional_variance();
  double r = 0.0;
  std::vector<double> out(T);
  for (std::size_t t = 0; t < burn_in + T; ++t) {
    r = std::sqrt(h) * rng.standard_normal();
    if (t >= burn_in) out[t - burn_in] = r;
    h = g.omega + g.alpha * r * r + g.beta * h;
  }
  return out;
}

namespace {

double log_likelihood_centered(std::span<const double> e, double start_var, const GarchParams& g) {
  constexpr double kLog2Pi = 1.8378770664093453;
  double h = start_var;
  double ll = 0.0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    if (t > 0) h = g.omega + g.alpha * e[t - 1] * e[t - 1] + g.beta * h;
    ll -= 0.5 * (kLog2Pi + std::log(h) + e[t] * e[t] / h);
  }
  return ll;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

GarchParams from_theta(const std::vector<double>& th, double sample_var) {
  const double p = logistic(th[1]);
  const double s = logistic(th[2]);
  GarchParams g;
  g.alpha = p * s;
  g.beta = p * (1.0 - s);
  g.omega = sample_var * (1.0 - p) * std::exp(th[0]);
  return g;
}

std::vector<double> to_theta(double alpha, double beta, double omega, double sample_var) {
  const double p = alpha + beta;
  return {std::log(omega / (sample_var * (1.0 - p))), logit(p), logit(alpha / p)};
}

}  // namespace

double garch_log_likelihood(std::span<const double> returns, const GarchParams& g) {
  if (returns.size() < 2) throw DomainError("garch_log_likelihood: need at least two returns");
  const double m = mean(returns);
  std::vector<double> e(returns.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = returns[i] - m;
  double v = 0.0;
  for (double x : e) v += x * x;
  v /= static_cast<double>(e.size());
  return log_likelihood_centered(e, v, g);
}

GarchFit fit_garch11(std::span<const double> returns, const SimplexOptions& options) {
  if (returns.size() < 1000) throw DomainError("fit_garch11: need at least 1000 returns");
  const double m = mean(returns);
  std::vector<double> e(returns.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = returns[i] - m;
  double v = 0.0;
  for (double x : e) v += x * x;
  v /= static_cast<double>(e.size());
  if (!(v > 0.0)) throw DataError("fit_garch11: returns have zero variance");

  auto objective = [&](const std::vector<double>& th) {
    for (double x : th)
      if (!std::isfinite(x)) return 1e300;
    const double nll = -log_likelihood_centered(e, v, from_theta(th, v));
    return std::isfinite(nll) ? nll : 1e300;
  };

  // Moment-based starts: omega at the value matching the sample variance,
  // a small grid over persistence and ARCH share.
  std::vector<double> start;
  double start_value = 0.0;
  for (double p : {0.90, 0.95, 0.98, 0.995}) {
    for (double a : {0.02, 0.05, 0.10}) {
      auto th = to_theta(a, p - a, v * (1.0 - p), v);
      const double f = objective(th);
      if (start.empty() || f < start_value) {
        start = th;
        start_value = f;
      }
    }
  }

  std::ostringstream trace;
  GarchFit fit;
  SimplexResult res;
  double previous = start_value;
  constexpr int kMaxRestarts = 8;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    res = nelder_mead(objective, start, options);
    fit.iterations += res.iterations;
    fit.restarts = restart;
    trace << "run " << restart << ": nll=" << res.value << " iterations=" << res.iterations
          << " converged=" << res.converged << "\n";
    const bool settled = std::abs(previous - res.value) <= 1e-9 * std::abs(res.value);
    previous = res.value;
    start = res.x;
    if (res.converged && (restart > 0 && settled)) break;
    if (restart == kMaxRestarts - 1 && !res.converged)
      throw NumericalError("fit_garch11: simplex did not converge\n" + trace.str());
  }
  fit.params = from_theta(res.x, v);
  fit.log_likelihood = -res.value;
  return fit;
}

std::vector<double> garch_predicted_beta_dist(const GarchParams& g, std::size_t T, int window,
                                              Rng& rng, std::size_t burn_in) {
  if (window < 2) throw DomainError("garch_predicted_beta_dist: window must be >= 2");
  if (T < static_cast<std::size_t>(window) * 10)
    throw DomainError("garch_predicted_beta_dist: T must be much larger than the window");
  const auto returns = simulate_garch(g, T, rng, burn_in);
  return beta_prime_pipeline(returns, window).beta_prime;
}

}  // namespace sfvol
