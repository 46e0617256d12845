#include <doctest.h>

#include <cmath>
#include <vector>

#include "sfvol/error.hpp"
#include "sfvol/garch.hpp"
#include "sfvol/optimize.hpp"
#include "sfvol/stats.hpp"

using namespace sfvol;

TEST_CASE("golden section and simplex find known minima") {
  const auto g = golden_section_minimize([](double x) { return (x - 1.3) * (x - 1.3); }, -5, 5, 1e-8);
  CHECK(g.x == doctest::Approx(1.3).epsilon(1e-6));
  const auto edge = golden_section_minimize([](double x) { return x; }, 2, 5, 1e-8);
  CHECK(edge.x == doctest::Approx(2.0));
  const auto r = nelder_mead(
      [](const std::vector<double>& v) {
        return 100 * std::pow(v[1] - v[0] * v[0], 2) + std::pow(1 - v[0], 2);
      },
      {-1.2, 1.0}, {20000, 1e-14, 1e-10, 0.5});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("GARCH simulation has the unconditional variance") {
  const GarchParams g{};
  CHECK(g.persistence() == doctest::Approx(0.989));
  Rng rng(41);
  const auto r = simulate_garch(g, 400000, rng);
  CHECK(variance(r) == doctest::Approx(g.unconditional_variance()).epsilon(0.1));
  CHECK(excess_kurtosis(r) > 0.5);
}

TEST_CASE("likelihood peaks near the generating parameters") {
  Rng rng(42);
  const GarchParams g{};
  const auto r = simulate_garch(g, 20000, rng);
  const double at_truth = garch_log_likelihood(r, g);
  CHECK(at_truth > garch_log_likelihood(r, {g.omega, 0.6, 0.3}));
  CHECK(at_truth > garch_log_likelihood(r, {g.omega * 5, 0.9, 0.089}));
}

TEST_CASE("QMLE on iid Gaussian returns finds no ARCH effect") {
  Rng rng(43);
  std::vector<double> r(20000);
  for (auto& v : r) v = 0.01 * rng.standard_normal();
  const auto fit = fit_garch11(r);
  // standard error of alpha is about 1/sqrt(n) under the null
  CHECK(fit.params.alpha < 2.0 / std::sqrt(20000.0));
  CHECK(fit.params.unconditional_variance() == doctest::Approx(1e-4).epsilon(0.05));
}

TEST_CASE("GARCH errors") {
  std::vector<double> r(500, 0.01);
  CHECK_THROWS_AS(fit_garch11(r), DomainError);
  CHECK_THROWS_AS((GarchParams{1e-6, 0.95, 0.1}.validate()), DomainError);
  CHECK_THROWS_AS((GarchParams{-1e-6, 0.5, 0.1}.validate()), DomainError);
}

TEST_CASE("GARCH beta' prediction is scale free") {
  const GarchParams g{};
  GarchParams big = g;
  big.omega *= 50.0;
  Rng r1(44), r2(44);
  const auto a = garch_predicted_beta_dist(g, 200000, 42, r1);
  const auto b = garch_predicted_beta_dist(big, 200000, 42, r2);
  REQUIRE(a.size() == b.size());
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  for (std::size_t i = 0; i < a.size(); i += 1000) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}
