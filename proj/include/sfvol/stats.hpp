#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sfvol {

struct AcfResult {
  std::vector<int> lags;  // 1..max_lag
  std::vector<double> values;
  std::size_t n = 0;
  double confidence_band = 0.0;  // 1.96 / sqrt(n)
};

/// Sample autocorrelation: global mean removed once, lag-0 variance with denominator n.
AcfResult acf(std::span<const double> series, int max_lag);

enum class Binning { linear, logarithmic };
enum class Normalization { counts, density };

struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;  // raw counts or densities, per `normalization`
  Normalization normalization = Normalization::counts;
  std::size_t outside = 0;     // samples outside [edges.front(), edges.back()]

  std::vector<double> centers() const;
};

/// Histogram over [lo, hi]. Density normalization divides by the total sample
/// count, so it integrates to 1 when every sample falls inside the range.
Histogram histogram(std::span<const double> samples, std::size_t bins, double lo, double hi,
                    Binning binning = Binning::linear,
                    Normalization normalization = Normalization::density);

struct SurvivalPoint {
  double x;
  double survival;  // fraction of samples strictly greater than x
};

std::vector<SurvivalPoint> survival_curve(std::span<const double> samples);

using Cdf = std::function<double(double)>;

struct BinningPolicy {
  std::size_t min_bins = 10;
  std::size_t samples_per_bin = 200;
  std::size_t max_bins = 50;
  double min_expected = 5.0;
};

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
  std::vector<std::string> warnings;
};

/// Pearson chi-square test with bins of equal probability under `reference_cdf`.
/// dof = bins - 1 - fitted_param_count.
GofResult chi_square_gof(std::span<const double> samples, const Cdf& reference_cdf,
                         int fitted_param_count, const BinningPolicy& policy = {});

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Asymptotic Kolmogorov tail probability Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
KsResult ks_one_sample(std::span<const double> samples, const Cdf& cdf);

/// Right-continuous empirical CDF of a reference sample.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> samples);
  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

/// Location-zero Student-t density. A Gaussian whose inverse variance is
/// Gamma(a, b) (rate form) is Student-t with dof = 2a and scale = sqrt(b / a).
double student_t_density(double x, double dof, double scale = 1.0);
double gaussian_density(double x, double mean = 0.0, double sd = 1.0);

double mean(std::span<const double> samples);
double variance(std::span<const double> samples);  // denominator n - 1
double excess_kurtosis(std::span<const double> samples);

// Reference CDFs in the project's conventions.
double gamma_cdf(double x, double shape, double rate);
double lognormal_cdf(double x, double mu, double sigma);
double inverse_gamma_cdf(double x, double shape, double scale);
double chi_square_upper_tail(double statistic, double dof);

}  // namespace sfvol
