// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion.
// Usage: sfvol_acceptance [--only N]
// Criteria 9 and 10 need SFVOL_DJIA_CSV / SFVOL_FTSE_CSV pointing at daily price files.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sfvol/estimation.hpp"
#include "sfvol/garch.hpp"
#include "sfvol/io.hpp"
#include "sfvol/mechanism.hpp"
#include "sfvol/model.hpp"
#include "sfvol/stats.hpp"

using namespace sfvol;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict all(std::initializer_list<bool> conds) {
  return std::all_of(conds.begin(), conds.end(), [](bool b) { return b; }) ? Verdict::pass
                                                                            : Verdict::fail;
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

bool within(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

std::vector<double> abs_of(std::vector<double> x) {
  for (auto& v : x) v = std::abs(v);
  return x;
}

Outcome c1_equilibrium() {
  const auto t0 = Clock::now();
  const ModelParams p{1e-4, 100.0, 0.0};
  Rng rng(1001);
  const int n = 1000000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += 1.0 / step_variance(p.sigma0_sq, p, rng);
  const double rel = std::abs(s / n * p.sigma0_sq - 1.0);
  const double secs = seconds_since(t0);
  return {all({rel < 0.005, secs < 10.0}),
          fmt("mean(1/var)*sigma0^2 off by %.4f%% (limit 0.5%%), %.2f s (limit 10 s)", 100 * rel, secs)};
}

Outcome c2_scale() {
  const std::size_t T = 100000;
  Rng r1(1002), r2(1002);
  const ModelParams a{1.0, 100.0, 0.0}, b{1e-4, 100.0, 0.0};
  const auto na = normalize(generate_path(a, T, r1), a, 1);
  const auto nb = normalize(generate_path(b, T, r2), b, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < T; ++i)
    worst = std::max(worst, std::abs(na.r_prime[i] - nb.r_prime[i]) /
                                std::max(std::abs(na.r_prime[i]), 1e-300));
  return {all({worst <= 1e-12}), fmt("max relative difference of r' %.3g (limit 1e-12)", worst)};
}

Outcome c3_reduction() {
  std::ostringstream d;
  bool ok = true;
  Rng root(1003);
  auto streams = root.split(4);
  int s = 0;
  for (double B : {10.0, 100.0}) {
    const ModelParams m{1e-4, B, 0.0};
    const auto matched = verify_reduction(m, 100000, streams[s++]);
    ReductionOptions mis;
    mis.lambda_e = B + 10.0;
    const auto mismatched = verify_reduction(m, 1000000, streams[s++], mis);
    ok = ok && matched.ks_p_value > 0.01 && mismatched.ks_p_value < 0.01;
    d << fmt("B=%g: matched KS p=%.3f (>0.01, thin %zu); lambda_e=B+10 KS p=%.3g (<0.01); ", B,
             matched.ks_p_value, matched.thin, mismatched.ks_p_value);
  }
  return {ok ? Verdict::pass : Verdict::fail, d.str()};
}

Outcome c4_gamma_shape() {
  Rng rng(1004);
  const auto beta = sample_stationary_beta(100.0, 1000000, 0, kDefaultBurnIn, rng);
  const auto f = fit_gamma(beta);
  return {all({f.gof.p_value > 0.01}),
          fmt("1e6 stationary beta' (thin %zu): gamma shape %.3f rate %.3f, chi2 %.1f dof %d, p=%.3f (>0.01)",
              decorrelation_lag(100.0), f.param("shape"), f.param("rate"), f.gof.statistic, f.gof.dof,
              f.gof.p_value)};
}

Outcome c5_crossover() {
  const auto t0 = Clock::now();
  const ModelParams p{1e-4, 164.0, 0.0};
  Rng rng(1005);
  const auto path = generate_path(p, 5000000, rng);
  std::vector<double> k;
  for (int dt : {1, 10, 100, 1000}) k.push_back(excess_kurtosis(normalize(path, p, dt).r_prime));
  const bool decreasing = k[0] > k[1] && k[1] > k[2] && k[2] > k[3];
  const double secs = seconds_since(t0);
  return {all({decreasing, k[0] > 1.0, k[3] < 0.3, secs < 120.0}),
          fmt("excess kurtosis at dt=1,10,100,1000: %.3f %.3f %.3f %.3f (decreasing %s, dt=1 >1, "
              "dt=1000 <0.3), %.1f s",
              k[0], k[1], k[2], k[3], decreasing ? "yes" : "no", secs)};
}

Outcome c6_acf() {
  std::ostringstream d;
  Rng root(1006);
  auto streams = root.split(3);
  std::vector<double> lag10;
  bool white = true;
  int s = 0;
  for (double B : {10.0, 100.0, 1000.0}) {
    const ModelParams p{1e-4, B, 0.0};
    const auto r = normalize(generate_path(p, 1000000, streams[s++]), p, 1).r_prime;
    lag10.push_back(acf(abs_of(r), 10).values[9]);
    const auto raw = acf(r, 100);
    const double band = 4.0 / std::sqrt(static_cast<double>(r.size()));
    int exceed = 0;
    double worst = 0.0;
    for (double v : raw.values) {
      exceed += std::abs(v) >= band;
      worst = std::max(worst, std::abs(v));
    }
    // heteroskedasticity-robust standard error of each raw autocorrelation, for reference
    double robust_worst = 0.0, denom = 0.0;
    const double m = mean(r);
    for (double v : r) denom += (v - m) * (v - m);
    for (int k = 1; k <= 100; ++k) {
      double num = 0.0;
      for (std::size_t t = 0; t + k < r.size(); ++t) {
        const double x = (r[t] - m) * (r[t + k] - m);
        num += x * x;
      }
      robust_worst = std::max(robust_worst, std::abs(raw.values[k - 1]) / (std::sqrt(num) / denom));
    }
    white = white && exceed == 0;
    d << fmt("B=%g: ACF|r'|(10)=%.4f, raw |ACF|max=%.4f vs 4/sqrt(n)=%.4f (%d lags outside), max "
             "robust z=%.2f; ",
             B, lag10.back(), worst, band, exceed, robust_worst);
  }
  const bool increasing = lag10[0] < lag10[1] && lag10[1] < lag10[2];
  return {all({increasing, white}), d.str()};
}

Outcome c7_recovery() {
  const auto t0 = Clock::now();
  const ModelParams truth{5.1e-5, 164.0, 0.0};
  Rng root(1007);
  auto streams = root.split(50);
  std::vector<double> s0, B;
  for (auto& rng : streams) {
    const auto path = generate_path(truth, 29000, rng);
    const auto vars = rolling_variance(path.returns);
    const double s = estimate_sigma0(vars);
    s0.push_back(s);
    B.push_back(estimate_B(vars, s).B);
  }
  const double ms = median(s0), mb = median(B);
  const double secs = seconds_since(t0);
  return {all({within(ms, truth.sigma0_sq, 0.10), within(mb, truth.B, 0.25), secs < 300.0}),
          fmt("median sigma0^2=%.4g (%.1f%%, limit 10%%), median B=%.1f (%.1f%%, limit 25%%), B range "
              "[%.1f, %.1f], %.1f s",
              ms, 100 * (ms / truth.sigma0_sq - 1), mb, 100 * (mb / truth.B - 1),
              *std::min_element(B.begin(), B.end()), *std::max_element(B.begin(), B.end()), secs)};
}

Outcome c8_garch() {
  const GarchParams truth{};
  Rng rng(1008);
  const auto r = simulate_garch(truth, 100000, rng);
  const auto fit = fit_garch11(r);
  const auto& g = fit.params;
  const bool rec = within(g.omega, truth.omega, 0.15) && within(g.beta, truth.beta, 0.15) &&
                   within(g.alpha, truth.alpha, 0.15);

  Rng urng(2008);
  std::vector<double> p;
  const auto unit = [](double x) { return std::clamp(x, 0.0, 1.0); };
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> u(100000);
    for (auto& v : u) v = urng.uniform();
    p.push_back(chi_square_gof(u, unit, 0).p_value);
  }
  const double ks_p = ks_one_sample(p, unit).p_value;
  return {all({rec, ks_p > 0.01}),
          fmt("QMLE omega=%.4g (%.1f%%) beta=%.4f (%.1f%%) alpha=%.4f (%.1f%%), limit 15%%; null "
              "p-value uniformity KS p=%.3f (>0.01)",
              g.omega, 100 * (g.omega / truth.omega - 1), g.beta, 100 * (g.beta / truth.beta - 1), g.alpha,
              100 * (g.alpha / truth.alpha - 1), ks_p)};
}

struct TableRow {
  double sigma0_sq, B, shape, scale, rate;
  double p[5];  // Gamma, Model, GARCH, Logn, InvGam
};

TableRow table_row(const std::string& file, std::uint64_t seed) {
  const auto returns = log_returns(load_price_csv(file));
  const auto data = beta_prime_pipeline(returns);
  const double B = estimate_B(data.variances, data.sigma0_sq).B;
  Rng root(seed);
  auto streams = root.split(2);
  TableRow row{};
  row.sigma0_sq = data.sigma0_sq;
  row.B = B;
  const auto g = fit_gamma(data.beta_prime);
  row.shape = g.param("shape");
  row.scale = g.param("scale");
  row.rate = g.param("rate");
  row.p[0] = g.gof.p_value;
  const auto mb = model_predicted_beta_dist({data.sigma0_sq, B, mean(returns)}, 1000000, kDefaultWindow,
                                            streams[0]);
  row.p[1] = compare_to_prediction(data.beta_prime, mb, Family::model_predicted, {}, 1).gof.p_value;
  const auto gf = fit_garch11(returns);
  const auto gb = garch_predicted_beta_dist(gf.params, 1000000, kDefaultWindow, streams[1]);
  row.p[2] = compare_to_prediction(data.beta_prime, gb, Family::garch_predicted, {}, 2).gof.p_value;
  row.p[3] = fit_lognormal(data.beta_prime).gof.p_value;
  row.p[4] = fit_invgamma(data.beta_prime).gof.p_value;
  return row;
}

std::string describe(const TableRow& r) {
  return fmt("sigma0^2=%.4g B=%.1f gamma{shape %.3f, scale %.3f | rate %.3f}; p-values Gamma %.2f "
             "Model %.2f GARCH %.2f Logn %.2f InvGam %.2f",
             r.sigma0_sq, r.B, r.shape, r.scale, r.rate, r.p[0], r.p[1], r.p[2], r.p[3], r.p[4]);
}

Outcome c9_djia() {
  const char* f = std::getenv("SFVOL_DJIA_CSV");
  if (!f || !*f) return {Verdict::skip, "set SFVOL_DJIA_CSV to a daily DJIA price CSV"};
  const auto r = table_row(f, 1009);
  return {all({within(r.sigma0_sq, 5.1e-5, 0.05), within(r.B, 164.0, 0.10), within(r.shape, 1.6, 0.15),
               within(r.scale, 0.6, 0.15), r.p[0] >= 0.05, r.p[1] >= 0.05, r.p[3] < 0.05, r.p[4] < 0.05,
               r.p[2] < 0.01}),
          describe(r)};
}

Outcome c10_ftse() {
  const char* f = std::getenv("SFVOL_FTSE_CSV");
  if (!f || !*f) return {Verdict::skip, "set SFVOL_FTSE_CSV to a daily FTSE price CSV"};
  const auto r = table_row(f, 1010);
  return {all({within(r.sigma0_sq, 6.3e-5, 0.05), within(r.B, 167.0, 0.10), r.p[2] >= 0.05, r.p[1] >= 0.05,
               r.p[3] < 0.05, r.p[4] < 0.01}),
          describe(r)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--only") only = std::atoi(argv[i + 1]);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"equilibrium identity", c1_equilibrium},
      {"scale invariance", c2_scale},
      {"mechanism reduction", c3_reduction},
      {"beta' gamma-shaped", c4_gamma_shape},
      {"crossover to Gaussian", c5_crossover},
      {"ACF ordering and white raw returns", c6_acf},
      {"estimator recovery", c7_recovery},
      {"GARCH round trip and GOF calibration", c8_garch},
      {"DJIA table row", c9_djia},
      {"FTSE table row", c10_ftse},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only && only != id) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::printf("[%s] criterion %d, %s: %s\n", tag, id, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += o.verdict == Verdict::fail;
  }
  return failures ? 1 : 0;
}
