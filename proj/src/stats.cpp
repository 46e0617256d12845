#include "sfvol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "sfvol/error.hpp"

namespace sfvol {

AcfResult acf(std::span<const double> series, int max_lag) {
  const std::size_t n = series.size();
  if (max_lag < 1) throw DomainError("acf: max_lag must be >= 1");
  if (static_cast<std::size_t>(max_lag) * 4 >= n) {
    std::ostringstream msg;
    msg << "acf: max_lag (" << max_lag << ") must be below length/4 (length " << n << ")";
    throw DomainError(msg.str());
  }
  const double m = mean(series);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - m;
  double c0 = 0.0;
  for (double x : centered) c0 += x * x;
  if (!(c0 > 0.0)) throw DomainError("acf: constant series, correlation undefined");

  AcfResult out;
  out.n = n;
  out.confidence_band = 1.96 / std::sqrt(static_cast<double>(n));
  out.lags.resize(max_lag);
  out.values.resize(max_lag);
  for (int k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) ck += centered[i] * centered[i + k];
    out.lags[k - 1] = k;
    out.values[k - 1] = ck / c0;
  }
  return out;
}

std::vector<double> Histogram::centers() const {
  std::vector<double> c(counts.size());
  const bool log_spaced =
      edges.size() > 2 && edges.front() > 0.0 &&
      std::abs((edges[2] - edges[1]) - (edges[1] - edges[0])) > 1e-9 * (edges[1] - edges[0]);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = log_spaced ? std::sqrt(edges[i] * edges[i + 1]) : 0.5 * (edges[i] + edges[i + 1]);
  return c;
}

Histogram histogram(std::span<const double> samples, std::size_t bins, double lo, double hi,
                    Binning binning, Normalization normalization) {
  if (bins == 0) throw DomainError("histogram: need at least one bin");
  if (!(hi > lo)) throw DomainError("histogram: need hi > lo");
  if (binning == Binning::logarithmic && !(lo > 0.0))
    throw DomainError("histogram: logarithmic binning needs lo > 0");

  Histogram h;
  h.normalization = normalization;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(bins);
    h.edges[i] = binning == Binning::linear
                     ? lo + f * (hi - lo)
                     : std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  h.edges.back() = hi;
  h.counts.assign(bins, 0.0);
  for (double x : samples) {
    if (!(x >= lo && x <= hi)) {
      ++h.outside;
      continue;
    }
    auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - h.edges.begin());
    idx = idx == 0 ? 0 : std::min(idx - 1, bins - 1);
    h.counts[idx] += 1.0;
  }
  if (normalization == Normalization::density && !samples.empty()) {
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < bins; ++i) h.counts[i] /= n * (h.edges[i + 1] - h.edges[i]);
  }
  return h;
}

std::vector<SurvivalPoint> survival_curve(std::span<const double> samples) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<SurvivalPoint> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.push_back({sorted[i], (n - static_cast<double>(i + 1)) / n});
  }
  return out;
}

double chi_square_upper_tail(double statistic, double dof) {
  if (!(dof > 0.0)) throw DomainError("chi_square_upper_tail: dof must be > 0");
  if (!(statistic > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

GofResult chi_square_gof(std::span<const double> samples, const Cdf& reference_cdf,
                         int fitted_param_count, const BinningPolicy& policy) {
  const std::size_t n = samples.size();
  if (n < 100) throw DomainError("chi_square_gof: need at least 100 samples");
  GofResult out;
  std::size_t bins =
      std::clamp(n / policy.samples_per_bin, policy.min_bins, std::max(policy.min_bins, policy.max_bins));
  if (static_cast<double>(n) / static_cast<double>(bins) < policy.min_expected) {
    const auto merged = static_cast<std::size_t>(static_cast<double>(n) / policy.min_expected);
    std::ostringstream msg;
    msg << "expected count below " << policy.min_expected << " with " << bins
        << " bins; merged to " << merged;
    out.warnings.push_back(msg.str());
    bins = merged;
  }
  const int dof = static_cast<int>(bins) - 1 - fitted_param_count;
  if (dof < 1) throw DomainError("chi_square_gof: fewer than one degree of freedom left");

  std::vector<double> observed(bins, 0.0);
  for (double x : samples) {
    const double u = reference_cdf(x);
    auto idx = static_cast<std::size_t>(std::floor(std::clamp(u, 0.0, 1.0) * bins));
    observed[std::min(idx, bins - 1)] += 1.0;
  }
  const double expected = static_cast<double>(n) / static_cast<double>(bins);
  double stat = 0.0;
  for (double o : observed) stat += (o - expected) * (o - expected) / expected;

  out.statistic = stat;
  out.dof = dof;
  out.bins = bins;
  out.p_value = chi_square_upper_tail(stat, dof);
  return out;
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double effective_n) {
  const double sn = std::sqrt(effective_n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return {d, ks_p_value(d, nx * ny / (nx + ny))};
}

KsResult ks_one_sample(std::span<const double> samples, const Cdf& cdf) {
  if (samples.empty()) throw DomainError("ks_one_sample: empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> samples)
    : sorted_(samples.begin(), samples.end()) {
  if (sorted_.empty()) throw DomainError("EmpiricalCdf: empty reference sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double student_t_density(double x, double dof, double scale) {
  if (!(dof > 0.0) || !(scale > 0.0)) throw DomainError("student_t_density: dof and scale must be > 0");
  const double z = x / scale;
  const double log_norm = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                          0.5 * std::log(dof * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (dof + 1.0) * std::log1p(z * z / dof)) / scale;
}

double gaussian_density(double x, double mean_, double sd) {
  if (!(sd > 0.0)) throw DomainError("gaussian_density: sd must be > 0");
  const double z = (x - mean_) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double mean(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("mean: empty sample");
  double m = 0.0;
  for (double x : samples) m += x;
  m /= static_cast<double>(samples.size());
  // second pass removes most of the rounding error of the naive sum
  double corr = 0.0;
  for (double x : samples) corr += x - m;
  return m + corr / static_cast<double>(samples.size());
}

double variance(std::span<const double> samples) {
  if (samples.size() < 2) throw DomainError("variance: need at least two samples");
  const double m = mean(samples);
  double s = 0.0;
  for (double x : samples) s += (x - m) * (x - m);
  return s / static_cast<double>(samples.size() - 1);
}

double excess_kurtosis(std::span<const double> samples) {
  if (samples.size() < 4) throw DomainError("excess_kurtosis: need at least four samples");
  const double m = mean(samples);
  double m2 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d2 = (x - m) * (x - m);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(samples.size());
  m2 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw DomainError("excess_kurtosis: zero variance");
  return m4 / (m2 * m2) - 3.0;
}

double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, rate * x);
}

double lognormal_cdf(double x, double mu, double sigma) {
  if (x <= 0.0) return 0.0;
  return 0.5 * boost::math::erfc(-(std::log(x) - mu) / (sigma * std::numbers::sqrt2));
}

double inverse_gamma_cdf(double x, double shape, double scale) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_q(shape, scale / x);
}

}  // namespace sfvol
