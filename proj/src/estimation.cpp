#include "sfvol/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "sfvol/error.hpp"
#include "sfvol/optimize.hpp"

namespace sfvol {

bool VarianceSeries::degenerate() const {
  return std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); });
}

VarianceSeries rolling_variance(std::span<const double> returns, int window) {
  if (window < 2) throw DomainError("rolling_variance: window must be >= 2");
  const auto w = static_cast<std::size_t>(window);
  if (returns.size() < w) {
    std::ostringstream msg;
    msg << "rolling_variance: insufficient data, " << returns.size()
        << " returns for a window of " << window;
    throw DataError(msg.str());
  }
  const double mu = mean(returns);
  std::vector<double> dev2(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) dev2[i] = (returns[i] - mu) * (returns[i] - mu);

  VarianceSeries out;
  out.window = window;
  out.first = w / 2;
  out.values.resize(returns.size() - w + 1);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = k; i < k + w; ++i) s += dev2[i];
    out.values[k] = s / static_cast<double>(w);
  }
  return out;
}

double estimate_sigma0(std::span<const double> variances) {
  if (variances.empty()) throw DataError("estimate_sigma0: empty variance series");
  double s = 0.0;
  for (double v : variances) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DataError("estimate_sigma0: degenerate input, variance estimate not strictly positive");
    s += 1.0 / v;
  }
  return static_cast<double>(variances.size()) / s;
}

double b_objective(std::span<const double> variances, double sigma0_sq, double B) {
  const double denom = (1.0 + B) * sigma0_sq;
  double sum = 0.0;
  for (std::size_t t = 1; t < variances.size(); ++t) {
    const double e = 1.0 / variances[t] - (1.0 + B * sigma0_sq / variances[t - 1]) / denom;
    sum += e * e;
  }
  return sum;
}

BEstimate estimate_B(std::span<const double> variances, double sigma0_sq) {
  if (variances.size() < 2) throw DataError("estimate_B: need at least two variance estimates");
  if (!(sigma0_sq > 0.0)) throw DomainError("estimate_B: sigma0_sq must be > 0");
  for (double v : variances)
    if (!(v > 0.0)) throw DataError("estimate_B: variance estimates must be strictly positive");

  auto f = [&](double log_b) { return b_objective(variances, sigma0_sq, std::exp(log_b)); };
  const double lo = std::log(kBMin), hi = std::log(kBMax);
  constexpr int kScan = 64;
  std::vector<double> xs(kScan + 1), fs(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    xs[i] = lo + (hi - lo) * i / kScan;
    fs[i] = f(xs[i]);
  }

  BEstimate out;
  double best_value = 0.0;
  bool have_best = false;
  for (int i = 0; i <= kScan; ++i) {
    const bool left_ok = i == 0 || fs[i] <= fs[i - 1];
    const bool right_ok = i == kScan || fs[i] < fs[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double a = xs[std::max(i - 1, 0)];
    const double b = xs[std::min(i + 1, kScan)];
    const ScalarMinimum m = golden_section_minimize(f, a, b, 1e-3);
    const double B = std::exp(m.x);
    out.local_minima.push_back(B);
    if (!have_best || m.value < best_value) {
      have_best = true;
      best_value = m.value;
      out.B = B;
    }
  }
  out.objective = best_value;
  out.at_boundary = std::abs(std::log(out.B) - lo) < 1e-3 || std::abs(std::log(out.B) - hi) < 1e-3;
  return out;
}

BetaPipeline beta_prime_pipeline(std::span<const double> returns, int window) {
  BetaPipeline p;
  p.variances = rolling_variance(returns, window);
  p.sigma0_sq = estimate_sigma0(p.variances);
  p.beta_prime.resize(p.variances.size());
  for (std::size_t i = 0; i < p.beta_prime.size(); ++i)
    p.beta_prime[i] = p.sigma0_sq / p.variances.values[i];
  return p;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::gamma: return "Gamma";
    case Family::model_predicted: return "Model";
    case Family::garch_predicted: return "GARCH";
    case Family::lognormal: return "Logn";
    case Family::inverse_gamma: return "InvGam";
  }
  return "?";
}

double FitResult::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p.value;
  throw DomainError("FitResult: no parameter named '" + name + "'");
}

namespace {

void check_samples(std::span<const double> samples, const char* who) {
  if (samples.size() < 100) throw DomainError(std::string(who) + ": need at least 100 samples");
  for (double x : samples)
    if (!(x > 0.0) || !std::isfinite(x))
      throw DomainError(std::string(who) + ": samples must be finite and > 0");
}

// Solves log a - digamma(a) = log(mean) - mean(log x) by Newton's method.
std::pair<double, double> gamma_mle(std::span<const double> x) {
  double m = 0.0, ml = 0.0;
  for (double v : x) {
    m += v;
    ml += std::log(v);
  }
  m /= static_cast<double>(x.size());
  ml /= static_cast<double>(x.size());
  const double s = std::log(m) - ml;
  if (!(s > 0.0)) throw NumericalError("gamma fit: samples have no spread");
  double a = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int it = 0; it < 100; ++it) {
    const double g = std::log(a) - boost::math::digamma(a) - s;
    const double dg = 1.0 / a - boost::math::trigamma(a);
    double next = a - g / dg;
    if (next <= 0.0) next = 0.5 * a;
    if (std::abs(next - a) <= 1e-14 * a) {
      a = next;
      break;
    }
    a = next;
  }
  return {a, a / m};
}

}  // namespace

FitResult fit_gamma(std::span<const double> samples) {
  check_samples(samples, "fit_gamma");
  const auto [shape, rate] = gamma_mle(samples);
  FitResult r;
  r.family = Family::gamma;
  r.n = samples.size();
  r.params = {{"shape", shape}, {"rate", rate}, {"scale", 1.0 / rate}};
  r.gof = chi_square_gof(samples, [=](double x) { return gamma_cdf(x, shape, rate); }, 2);
  return r;
}

FitResult fit_lognormal(std::span<const double> samples) {
  check_samples(samples, "fit_lognormal");
  std::vector<double> logs(samples.size());
  std::transform(samples.begin(), samples.end(), logs.begin(), [](double x) { return std::log(x); });
  const double mu = mean(logs);
  double ss = 0.0;
  for (double l : logs) ss += (l - mu) * (l - mu);
  const double sigma = std::sqrt(ss / static_cast<double>(logs.size()));
  FitResult r;
  r.family = Family::lognormal;
  r.n = samples.size();
  r.params = {{"mu", mu}, {"sigma", sigma}};
  r.gof = chi_square_gof(samples, [=](double x) { return lognormal_cdf(x, mu, sigma); }, 2);
  return r;
}

FitResult fit_invgamma(std::span<const double> samples) {
  check_samples(samples, "fit_invgamma");
  std::vector<double> inv(samples.size());
  std::transform(samples.begin(), samples.end(), inv.begin(), [](double x) { return 1.0 / x; });
  const auto [shape, scale] = gamma_mle(inv);
  FitResult r;
  r.family = Family::inverse_gamma;
  r.n = samples.size();
  r.params = {{"shape", shape}, {"scale", scale}, {"rate", 1.0 / scale}};
  r.gof = chi_square_gof(samples, [=](double x) { return inverse_gamma_cdf(x, shape, scale); }, 2);
  return r;
}

FitResult compare_to_prediction(std::span<const double> samples,
                                std::span<const double> predicted, Family family,
                                std::vector<NamedParam> params, int fitted_param_count) {
  const EmpiricalCdf reference(predicted);
  FitResult r;
  r.family = family;
  r.n = samples.size();
  r.params = std::move(params);
  r.gof = chi_square_gof(samples, [&](double x) { return reference(x); }, fitted_param_count);
  return r;
}

std::vector<double> model_predicted_beta_dist(const ModelParams& params, std::size_t T,
                                              int window, Rng& rng, std::size_t burn_in) {
  if (window < 2) throw DomainError("model_predicted_beta_dist: window must be >= 2");
  if (T < static_cast<std::size_t>(window) * 10)
    throw DomainError("model_predicted_beta_dist: T must be much larger than the window");
  const PathSample path = generate_path(params, T, params.sigma0_sq, burn_in, rng);
  return beta_prime_pipeline(path.returns, window).beta_prime;
}

PowerLawFit fit_powerlaw_acf(std::span<const double> acf_values, int lag_min, int lag_max) {
  if (lag_min < 1 || lag_max < lag_min)
    throw DomainError("fit_powerlaw_acf: need 1 <= lag_min <= lag_max");
  if (static_cast<std::size_t>(lag_max) > acf_values.size())
    throw DomainError("fit_powerlaw_acf: lag_max beyond the supplied ACF");

  PowerLawFit out;
  out.lag_min = lag_min;
  out.lag_max = lag_max;
  for (int k = lag_min; k <= lag_max; ++k) {
    if (!(acf_values[k - 1] > 0.0)) {
      std::ostringstream msg;
      msg << "non-positive ACF at lag " << k << "; fit range reduced to [" << lag_min << ", "
          << k - 1 << "]";
      out.warnings.push_back(msg.str());
      out.lag_max = k - 1;
      break;
    }
  }
  const int n = out.lag_max - lag_min + 1;
  if (n < 2) throw DataError("fit_powerlaw_acf: fewer than two positive ACF values in range");

  std::vector<double> u(n), y(n);
  for (int i = 0; i < n; ++i) {
    u[i] = std::log(static_cast<double>(lag_min + i));
    y[i] = std::log(acf_values[lag_min + i - 1]);
  }
  const double mu_u = mean(u), mu_y = mean(y);
  double suu = 0.0, suy = 0.0;
  for (int i = 0; i < n; ++i) {
    suu += (u[i] - mu_u) * (u[i] - mu_u);
    suy += (u[i] - mu_u) * (y[i] - mu_y);
  }
  const double slope = suy / suu;
  const double intercept = mu_y - slope * mu_u;
  out.exponent = -slope;
  out.amplitude = std::exp(intercept);
  out.residuals.resize(n);
  for (int i = 0; i < n; ++i) out.residuals[i] = y[i] - (intercept + slope * u[i]);

  // Curvature: regress residuals on the part of u^2 orthogonal to {1, u}.
  if (n >= 4) {
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) q[i] = (u[i] - mu_u) * (u[i] - mu_u);
    const double mu_q = mean(q);
    double suq = 0.0;
    for (int i = 0; i < n; ++i) suq += (u[i] - mu_u) * (q[i] - mu_q);
    double sqq = 0.0, sqr = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = (q[i] - mu_q) - suq / suu * (u[i] - mu_u);
      q[i] = z;
      sqq += z * z;
      sqr += z * out.residuals[i];
    }
    if (sqq > 0.0) {
      out.curvature = sqr / sqq;
      double rss = 0.0;
      for (int i = 0; i < n; ++i) {
        const double e = out.residuals[i] - out.curvature * q[i];
        rss += e * e;
      }
      const double se = std::sqrt(rss / (n - 3) / sqq);
      // noiseless input: an exact power law has no curvature to report
      out.curvature_t = se > 0.0 && std::abs(out.curvature) > 1e-12 ? out.curvature / se : 0.0;
    }
  }
  return out;
}

}  // namespace sfvol
