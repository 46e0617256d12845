#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "sfvol/error.hpp"
#include "sfvol/rng.hpp"
#include "sfvol/sampling.hpp"
#include "sfvol/stats.hpp"

using namespace sfvol;

namespace {
std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.standard_normal();
  return x;
}

std::vector<double> student_t_draws(std::size_t n, double dof, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) {
    const double g = sample_gamma({dof / 2, dof / 2}, rng);
    v = rng.standard_normal() / std::sqrt(g);
  }
  return x;
}
}  // namespace

TEST_CASE("white noise ACF stays inside the 4/sqrt(n) band") {
  const auto x = normals(100000, 1);
  const auto a = acf(x, 100);
  CHECK(a.lags.front() == 1);
  CHECK(a.lags.size() == 100);
  CHECK(a.confidence_band == doctest::Approx(1.96 / std::sqrt(1e5)));
  int exceed = 0;
  for (double v : a.values) exceed += std::abs(v) >= 4 / std::sqrt(1e5);
  CHECK(exceed <= 1);
}

TEST_CASE("AR(1) ACF matches 0.5^k") {
  Rng rng(2);
  std::vector<double> x(1000000);
  double prev = 0;
  for (auto& v : x) prev = v = 0.5 * prev + rng.standard_normal();
  const auto a = acf(x, 10);
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(a.values[k - 1] - std::pow(0.5, k)) < 0.01);
}

TEST_CASE("ACF is invariant to a sign flip and to affine maps") {
  auto x = normals(5000, 3);
  for (std::size_t i = 1; i < x.size(); ++i) x[i] += 0.3 * x[i - 1];
  auto y = x;
  for (auto& v : y) v = -2.0 * v + 7.0;
  const auto a = acf(x, 20), b = acf(y, 20);
  for (std::size_t k = 0; k < 20; ++k) CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-10));
}

TEST_CASE("ACF uses the biased denominator with one global mean") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  // mean 5, sum of squares 60, lag-1 cross sum = sum_{t} (x_t-5)(x_{t+1}-5) = 40
  CHECK(acf(x, 2).values[0] == doctest::Approx(40.0 / 60.0));
}

TEST_CASE("ACF errors") {
  std::vector<double> c(100, 1.0);
  CHECK_THROWS_AS(acf(c, 5), DomainError);
  const auto x = normals(100, 1);
  CHECK_THROWS_AS(acf(x, 25), DomainError);
  CHECK_THROWS_AS(acf(x, 0), DomainError);
}

TEST_CASE("histogram densities integrate to one") {
  Rng rng(4);
  std::vector<double> x(10000);
  for (auto& v : x) v = sample_gamma({2.0, 2.0}, rng);
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  for (auto b : {Binning::linear, Binning::logarithmic}) {
    const auto h = histogram(x, 37, lo, hi, b);
    double total = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) total += h.counts[i] * (h.edges[i + 1] - h.edges[i]);
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(h.outside == 0);
    CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
  }
  const auto c = histogram(x, 10, 0.0, 1.0, Binning::linear, Normalization::counts);
  CHECK(std::accumulate(c.counts.begin(), c.counts.end(), 0.0) + c.outside == x.size());
  CHECK_THROWS_AS(histogram(x, 10, 0.0, 1.0, Binning::logarithmic), DomainError);
}

TEST_CASE("survival curve") {
  const std::vector<double> x{3, 1, 2};
  const auto s = survival_curve(x);
  REQUIRE(s.size() == 3);
  CHECK(s[0].x == 1);
  CHECK(s[0].survival == doctest::Approx(2.0 / 3));
  CHECK(s[1].survival == doctest::Approx(1.0 / 3));
  CHECK(s[2].survival == 0.0);

  Rng rng(5);
  std::vector<double> e(1000000);
  for (auto& v : e) v = sample_exponential(1.0, rng);
  const auto c = survival_curve(e);
  for (std::size_t i = 1; i < c.size(); ++i) REQUIRE(c[i].survival <= c[i - 1].survival);
  CHECK(c.front().survival <= 1.0);
  CHECK(c.back().survival == 0.0);
  // least-squares slope of log S over [0, 5]
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  const std::size_t step = 97;
  for (std::size_t i = 0; i < c.size(); i += step) {
    if (c[i].x > 5.0) break;
    const double y = std::log(c[i].survival);
    sx += c[i].x, sy += y, sxx += c[i].x * c[i].x, sxy += c[i].x * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope + 1.0) < 0.02);
}

TEST_CASE("chi-square p-values are uniform under the null") {
  Rng rng(6);
  std::vector<double> p;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> u(10000);
    for (auto& v : u) v = rng.uniform();
    p.push_back(chi_square_gof(u, [](double x) { return std::clamp(x, 0.0, 1.0); }, 0).p_value);
  }
  CHECK(ks_one_sample(p, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.01);
}

TEST_CASE("chi-square detects fat tails") {
  const auto t = student_t_draws(100000, 4.0, 7);
  const double sd = std::sqrt(2.0);
  const auto r = chi_square_gof(t, [&](double x) { return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))); }, 0);
  CHECK(r.p_value < 1e-6);
}

TEST_CASE("chi-square against the sample's own quantiles never rejects") {
  const auto x = normals(20000, 8);
  const EmpiricalCdf ecdf(x);
  const auto r = chi_square_gof(x, [&](double v) { return ecdf(v); }, 0);
  CHECK(r.statistic <= r.dof + 3 * std::sqrt(2.0 * r.dof));
  CHECK(r.p_value > 0.01);
}

TEST_CASE("chi-square bookkeeping") {
  const auto x = normals(20000, 9);
  const auto cdf = [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); };
  const auto r = chi_square_gof(x, cdf, 2);
  CHECK(r.bins == 50);
  CHECK(r.dof == 47);
  const auto small = chi_square_gof(std::span(x).first(1000), cdf, 0);
  CHECK(small.bins == 10);
  CHECK_THROWS_AS(chi_square_gof(std::span(x).first(99), cdf, 0), DomainError);
  CHECK(chi_square_upper_tail(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("KS tests") {
  CHECK(kolmogorov_q(1.3580986393225507) == doctest::Approx(0.05).epsilon(1e-6));
  const auto a = normals(20000, 10), b = normals(20000, 11);
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  auto c = normals(20000, 12);
  for (auto& v : c) v += 0.1;
  CHECK(ks_two_sample(a, c).p_value < 0.01);
}

TEST_CASE("empirical CDF") {
  const std::vector<double> x{1, 2, 2, 4};
  const EmpiricalCdf f(x);
  CHECK(f(0.5) == 0.0);
  CHECK(f(2.0) == 0.75);
  CHECK(f(3.0) == 0.75);
  CHECK(f(4.0) == 1.0);
}

TEST_CASE("Student-t density") {
  CHECK(student_t_density(0.0, 4.0) == doctest::Approx(0.375).epsilon(1e-10));
  for (double x : {-2.5, 0.3, 1.7}) {
    const double nu = 4.0;
    const double expected =
        std::exp(std::lgamma(2.5) - std::lgamma(2.0)) / std::sqrt(nu * M_PI) * std::pow(1 + x * x / nu, -2.5);
    CHECK(student_t_density(x, nu) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(student_t_density(1.0, 4.0, 2.0) == doctest::Approx(student_t_density(0.5, 4.0) / 2.0));
  CHECK(student_t_density(0.0, 1e7) == doctest::Approx(gaussian_density(0.0)).epsilon(1e-3));
  CHECK(gaussian_density(1.0, 1.0, 2.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(2 * M_PI))));
}

TEST_CASE("gamma mixture of Gaussians is Student-t") {
  Rng rng(13);
  std::vector<double> x(1000000);
  for (auto& v : x) {
    const double g = sample_gamma({2.0, 2.0}, rng);
    v = rng.standard_normal() / std::sqrt(g);
  }
  const boost::math::students_t_distribution<double> t4(4.0);
  const auto r = chi_square_gof(x, [&](double v) { return boost::math::cdf(t4, v); }, 0);
  CHECK(r.p_value > 0.01);
}

TEST_CASE("moments") {
  const auto z = normals(1000000, 14);
  CHECK(std::abs(excess_kurtosis(z)) < 0.05);
  CHECK(std::abs(excess_kurtosis(student_t_draws(1000000, 6.0, 15)) - 3.0) < 0.3);
  Rng rng(16);
  std::vector<double> lap(1000000);
  for (auto& v : lap) v = (rng.uniform() < 0.5 ? -1 : 1) * sample_exponential(1.0, rng);
  CHECK(std::abs(excess_kurtosis(lap) - 3.0) < 0.3);
  const std::vector<double> s{1, 2, 3, 4};
  CHECK(mean(s) == 2.5);
  CHECK(variance(s) == doctest::Approx(5.0 / 3));
}

TEST_CASE("distribution helpers agree") {
  CHECK(inverse_gamma_cdf(0.7, 1.3, 0.5) == doctest::Approx(1.0 - gamma_cdf(1 / 0.7, 1.3, 0.5)));
  CHECK(gamma_cdf(1.0, 1.0, 2.0) == doctest::Approx(1 - std::exp(-2.0)));
  CHECK(lognormal_cdf(std::exp(0.3), 0.3, 0.8) == doctest::Approx(0.5));
}
