#include <doctest.h>

#include <cmath>
#include <vector>

#include "sfvol/error.hpp"
#include "sfvol/mechanism.hpp"
#include "sfvol/stats.hpp"

using namespace sfvol;

TEST_CASE("closure reproduces the model parameters") {
  const ModelParams m{5e-5, 164.0, 0.0};
  const auto p = MechanismParams::from_model(m);
  CHECK(p.lambda_e == doctest::Approx(165.0));
  CHECK(p.A == doctest::Approx(5e-5 * 164.0));
  CHECK(p.delta_sq_N == doctest::Approx(5e-5));
  CHECK(p.closure_holds());
  auto q = p;
  q.A *= 1.1;
  CHECK_FALSE(q.closure_holds());
}

TEST_CASE("one mechanism step has the model's one-step law") {
  const ModelParams m{1e-4, 30.0, 0.0};
  const auto p = MechanismParams::from_model(m);
  Rng r1(8), r2(9);
  const double prev = 3e-4;
  std::vector<double> a(40000), b(40000);
  for (auto& v : a) v = mech_step(prev, p, r1).var;
  for (auto& v : b) v = step_variance(prev, m, r2);
  CHECK(ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("step bookkeeping") {
  const auto p = MechanismParams::from_closure(11.0, 2.0);
  Rng rng(1);
  const auto s = mech_step(4.0, p, rng);
  CHECK(s.M == doctest::Approx(1.0 + p.A / 4.0));
  CHECK(s.lambda_hat_e == doctest::Approx(s.M / s.tau));
  CHECK(s.var == doctest::Approx(p.delta_sq_N / s.tau));
}

TEST_CASE("explicit event sums agree with the gamma shortcut for integer M") {
  // sigma0^2 = 1, lambda_e = 5 gives A = 4, so prev = 1 makes M = 5 exactly.
  const auto p = MechanismParams::from_closure(5.0, 1.0);
  Rng r1(2), r2(3);
  std::vector<double> a(30000), b(30000);
  for (auto& v : a) v = mech_step(1.0, p, r1).tau;
  for (auto& v : b) v = mech_step_integer_events(1.0, p, r2).tau;
  CHECK(ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("reduction holds for a matched rate and fails for a mismatched one") {
  const ModelParams m{1e-4, 10.0, 0.0};
  Rng rng(2024);
  const auto ok = verify_reduction(m, 5000, rng);
  CHECK(ok.thin == decorrelation_lag(10.0));
  CHECK(ok.ks_p_value > 0.01);
  CHECK(ok.max_acf_abs_diff < 0.1);

  ReductionOptions bad;
  bad.lambda_e = m.B + 10.0;
  Rng rng2(2024);
  CHECK(verify_reduction(m, 5000, rng2, bad).ks_p_value < 0.01);
}

TEST_CASE("mechanism rejects bad inputs") {
  auto p = MechanismParams::from_closure(11.0, 1e-4);
  Rng rng(1);
  CHECK_THROWS_AS(mech_step(0.0, p, rng), DomainError);
  p.lambda_e = 0.5;
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_THROWS_AS(verify_reduction({1e-4, 10.0, 0.0}, 50, rng), DomainError);
}
