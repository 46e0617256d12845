#include "sfvol/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sfvol/error.hpp"
#include "sfvol/estimation.hpp"
#include "sfvol/garch.hpp"
#include "sfvol/io.hpp"
#include "sfvol/mechanism.hpp"
#include "sfvol/model.hpp"
#include "sfvol/stats.hpp"

namespace sfvol {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxSurvivalRows = 5000;

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

json fit_json(const FitResult& f) {
  json params = json::object();
  for (const auto& p : f.params) params[p.name] = p.value;
  return {{"family", family_name(f.family)},
          {"params", params},
          {"n", f.n},
          {"chi_square", f.gof.statistic},
          {"dof", f.gof.dof},
          {"bins", f.gof.bins},
          {"p_value", f.gof.p_value},
          {"warnings", f.gof.warnings}};
}

// A return series plus, when known, the instantaneous variances behind it.
struct Source {
  std::string kind;  // "data", "path" or "simulated"
  std::vector<double> returns;
  std::vector<double> variance;
  json info = json::object();
};

Source load_source(const RunConfig& cfg, Rng& rng, std::ostream& log) {
  Source s;
  if (!cfg.data.empty()) {
    const PriceSeries prices = load_price_csv(cfg.data, cfg.schema, cfg.label);
    for (const auto& w : prices.warnings) log << "warning: " << w << '\n';
    s.kind = "data";
    s.returns = log_returns(prices);
    s.info = {{"source", prices.source_label},
              {"prices", prices.size()},
              {"rows_read", prices.rows_read},
              {"dropped_missing", prices.dropped_missing},
              {"dropped_nonpositive", prices.dropped_nonpositive},
              {"skipped_unparseable", prices.skipped_unparseable},
              {"first_date", prices.size() ? format_date(prices.dates.front()) : ""},
              {"last_date", prices.size() ? format_date(prices.dates.back()) : ""}};
    return s;
  }
  if (!cfg.path.empty()) {
    CsvTable t = read_plot_csv(cfg.path);
    if (!t.columns.count("return")) throw DataError(cfg.path + " has no `return` column");
    s.kind = "path";
    s.returns = std::move(t.columns["return"]);
    if (t.columns.count("variance")) s.variance = std::move(t.columns["variance"]);
    s.info = {{"source", cfg.path}, {"returns", s.returns.size()}};
    return s;
  }
  PathSample p = generate_path(cfg.model, cfg.T, cfg.resolved_init_var(), cfg.burn_in, rng);
  s.kind = "simulated";
  s.returns = std::move(p.returns);
  s.variance = std::move(p.variance);
  s.info = {{"source", "simulated"}, {"returns", s.returns.size()}};
  return s;
}

std::vector<double> abs_values(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::abs(v); });
  return out;
}

std::vector<double> normalized_returns(std::span<const double> returns, double sigma0_sq, double mu,
                                       int dt) {
  auto r = aggregate_returns(returns, dt);
  const double denom = std::sqrt(sigma0_sq * dt);
  for (double& x : r) x = (x - mu * dt) / denom;
  return r;
}

double quantile(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  const auto idx = static_cast<std::size_t>(q * static_cast<double>(x.size() - 1));
  return x[idx];
}

void write_survival(const std::string& file, const std::string& header,
                    std::span<const double> samples) {
  const auto curve = survival_curve(samples);
  const std::size_t step = std::max<std::size_t>(1, curve.size() / kMaxSurvivalRows);
  std::vector<double> xs, ss;
  for (std::size_t i = 0; i < curve.size(); i += step) {
    xs.push_back(curve[i].x);
    ss.push_back(curve[i].survival);
  }
  if (xs.back() != curve.back().x) {
    xs.push_back(curve.back().x);
    ss.push_back(curve.back().survival);
  }
  write_plot_csv(file, header, {"beta_prime", "survival"}, {xs, ss});
}

// Normalized quantities for a source: instantaneous variances when the source
// carries them, otherwise the rolling-window pipeline.
struct Normalized {
  std::string beta_method;
  double sigma0_sq = 0.0;
  double mu = 0.0;
  std::vector<double> beta_prime;
};

Normalized normalize_source(const Source& s, const RunConfig& cfg) {
  Normalized n;
  if (!s.variance.empty()) {
    n.beta_method = "instantaneous";
    n.sigma0_sq = cfg.model.sigma0_sq;
    n.mu = cfg.model.mu;
    n.beta_prime.resize(s.variance.size());
    for (std::size_t i = 0; i < s.variance.size(); ++i)
      n.beta_prime[i] = n.sigma0_sq / s.variance[i];
  } else {
    n.beta_method = "rolling_window";
    BetaPipeline p = beta_prime_pipeline(s.returns, cfg.window);
    n.sigma0_sq = p.sigma0_sq;
    n.mu = mean(s.returns);
    n.beta_prime = std::move(p.beta_prime);
  }
  return n;
}

}  // namespace

json run_simulate(const RunConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  Rng rng(cfg.seed);
  const PathSample path = generate_path(cfg.model, cfg.T, cfg.resolved_init_var(), cfg.burn_in, rng);
  std::vector<double> t(path.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  const std::string file = cfg.output_path("simulate.csv");
  write_plot_csv(file, cfg.header_json(), {"t", "variance", "return"},
                 {t, path.variance, path.returns});
  log << "wrote " << path.size() << " days to " << file << '\n';
  return {{"config", cfg.to_json()}, {"file", file}, {"days", path.size()}};
}

json run_mechanism(const RunConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  cfg.model.validate();
  Rng root(cfg.seed);
  auto streams = root.split(2);

  MechanismParams mech = MechanismParams::from_model(cfg.model);
  if (cfg.lambda_e > 0.0) mech.lambda_e = cfg.lambda_e;
  std::vector<double> t, M, tau, lhat, lam, var;
  double v = cfg.resolved_init_var();
  for (std::uint64_t i = 0; i < cfg.burn_in + cfg.T; ++i) {
    const MechanismStep s = mech_step(v, mech, streams[0]);
    v = s.var;
    if (i < cfg.burn_in) continue;
    t.push_back(static_cast<double>(i - cfg.burn_in));
    M.push_back(s.M);
    tau.push_back(s.tau);
    lhat.push_back(s.lambda_hat_e);
    lam.push_back(s.lambda_t);
    var.push_back(s.var);
  }
  const std::string csv = cfg.output_path("mechanism.csv");
  write_plot_csv(csv, cfg.header_json(), {"t", "M", "tau", "lambda_hat_e", "lambda_t", "variance"},
                 {t, M, tau, lhat, lam, var});

  ReductionOptions opt;
  opt.burn_in = cfg.burn_in;
  opt.thin = cfg.thin;
  if (cfg.lambda_e > 0.0) opt.lambda_e = cfg.lambda_e;
  const ReductionReport r = verify_reduction(cfg.model, cfg.T, streams[1], opt);
  json report = {{"config", cfg.to_json()},
                 {"mechanism",
                  {{"lambda_e", mech.lambda_e},
                   {"A", mech.A},
                   {"delta_sq_N", mech.delta_sq_N},
                   {"closure_holds", mech.closure_holds()}}},
                 {"reduction",
                  {{"lambda_e", r.lambda_e},
                   {"samples", r.samples},
                   {"thin", r.thin},
                   {"ks_statistic", r.ks_statistic},
                   {"ks_p_value", r.ks_p_value},
                   {"equivalent_at_1pct", r.ks_p_value > 0.01},
                   {"acf_abs_diff", r.acf_abs_diff},
                   {"max_acf_abs_diff", r.max_acf_abs_diff}}}};
  const std::string js = cfg.output_path("reduction.json");
  write_json(js, report);
  log << "mechanism chain: " << csv << "\nreduction: KS D=" << r.ks_statistic
      << " p=" << r.ks_p_value << " (" << r.samples << " samples, thin " << r.thin << ")\n";
  return report;
}

json run_estimate(const RunConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  Rng rng(cfg.seed);
  const Source s = load_source(cfg, rng, log);
  const VarianceSeries vars = rolling_variance(s.returns, cfg.window);
  if (vars.degenerate())
    throw DataError("rolling variance has zero entries; constant returns cannot be inverted");
  const double s0 = estimate_sigma0(vars);
  const BEstimate b = estimate_B(vars, s0);
  json out = {{"config", cfg.to_json()},
              {"input", s.info},
              {"returns", s.returns.size()},
              {"mu_hat", mean(s.returns)},
              {"window", cfg.window},
              {"variance_estimates", vars.size()},
              {"sigma0_sq", s0},
              {"B", b.B},
              {"objective", b.objective},
              {"local_minima", b.local_minima},
              {"at_boundary", b.at_boundary}};
  if (b.local_minima.size() > 1) log << "warning: B objective has several local minima\n";
  write_json(cfg.output_path("estimate.json"), out);
  log << std::setprecision(6) << "sigma0_sq = " << s0 << "\nB = " << b.B << '\n';
  return out;
}

json run_analyze(const RunConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  Rng rng(cfg.seed);
  const Source s = load_source(cfg, rng, log);
  const Normalized n = normalize_source(s, cfg);
  const std::string header = cfg.header_json();

  const auto r1 = normalized_returns(s.returns, n.sigma0_sq, n.mu, 1);
  const AcfResult acf_abs = acf(abs_values(r1), cfg.max_lag);
  const AcfResult acf_raw = acf(r1, cfg.max_lag);
  {
    std::vector<double> lags(acf_abs.lags.begin(), acf_abs.lags.end());
    std::vector<double> band(lags.size(), acf_abs.confidence_band);
    write_plot_csv(cfg.output_path("acf.csv"), header, {"lag", "acf_abs_r", "acf_r", "band"},
                   {lags, acf_abs.values, acf_raw.values, band});
  }

  json powerlaw = nullptr;
  try {
    const PowerLawFit pl = fit_powerlaw_acf(acf_abs.values, cfg.powerlaw_lag_min, cfg.powerlaw_lag_max);
    powerlaw = {{"amplitude", pl.amplitude}, {"exponent", pl.exponent}, {"lag_min", pl.lag_min},
                {"lag_max", pl.lag_max}, {"curvature", pl.curvature},
                {"curvature_t", pl.curvature_t}, {"warnings", pl.warnings}};
  } catch (const DataError& e) {
    log << "warning: power-law fit skipped: " << e.what() << '\n';
  }

  const FitResult gfit = fit_gamma(n.beta_prime);
  const double a = gfit.param("shape"), b = gfit.param("rate");
  {
    const double hi = *std::max_element(n.beta_prime.begin(), n.beta_prime.end());
    const double lo = *std::min_element(n.beta_prime.begin(), n.beta_prime.end());
    const Histogram lin = histogram(n.beta_prime, cfg.bins, 0.0, hi);
    std::vector<double> fitted;
    for (double c : lin.centers())
      fitted.push_back(std::exp(a * std::log(b) - std::lgamma(a) + (a - 1) * std::log(c) - b * c));
    write_plot_csv(cfg.output_path("beta_hist.csv"), header,
                   {"bin_lo", "bin_hi", "center", "density", "gamma_fit"},
                   {{lin.edges.begin(), lin.edges.end() - 1}, {lin.edges.begin() + 1, lin.edges.end()},
                    lin.centers(), lin.counts, fitted});
    const Histogram lg = histogram(n.beta_prime, cfg.bins, lo, hi, Binning::logarithmic);
    write_plot_csv(cfg.output_path("beta_hist_log.csv"), header,
                   {"bin_lo", "bin_hi", "center", "density"},
                   {{lg.edges.begin(), lg.edges.end() - 1}, {lg.edges.begin() + 1, lg.edges.end()},
                    lg.centers(), lg.counts});
  }
  write_survival(cfg.output_path("beta_survival.csv"), header, n.beta_prime);

  // Student-t from the gamma mixture; Gaussian with the same variance when finite.
  const double t_dof = 2.0 * a, t_scale = std::sqrt(b / a);
  json kurt = json::array();
  std::vector<double> col_dt, col_c, col_d, col_t, col_g;
  for (int dt : cfg.delta_t) {
    const auto r = normalized_returns(s.returns, n.sigma0_sq, n.mu, dt);
    if (r.size() < 100) {
      log << "warning: delta_t=" << dt << " leaves only " << r.size() << " returns; skipped\n";
      continue;
    }
    const double sd = a > 1.0 ? std::sqrt(b / (a - 1.0)) : std::sqrt(variance(r));
    kurt.push_back({{"delta_t", dt}, {"n", r.size()}, {"excess_kurtosis", excess_kurtosis(r)},
                    {"variance", variance(r)}});
    const auto absr = abs_values(r);
    const double spread = 1.4826 * quantile(absr, 0.5);
    const double h = std::min(*std::max_element(absr.begin(), absr.end()), 12.0 * spread);
    const Histogram hist = histogram(r, cfg.bins, -h, h);
    const auto centers = hist.centers();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      col_dt.push_back(dt);
      col_c.push_back(centers[i]);
      col_d.push_back(hist.counts[i]);
      col_t.push_back(student_t_density(centers[i], t_dof, t_scale));
      col_g.push_back(gaussian_density(centers[i], 0.0, sd));
    }
  }
  write_plot_csv(cfg.output_path("returns_pdf.csv"), header,
                 {"delta_t", "center", "density", "student_t", "gaussian"},
                 {col_dt, col_c, col_d, col_t, col_g});

  json out = {{"config", cfg.to_json()},
              {"input", s.info},
              {"beta_method", n.beta_method},
              {"sigma0_sq", n.sigma0_sq},
              {"mu", n.mu},
              {"returns", s.returns.size()},
              {"beta_prime_mean", mean(n.beta_prime)},
              {"gamma_fit", fit_json(gfit)},
              {"student_t", {{"dof", t_dof}, {"scale", t_scale}}},
              {"kurtosis", kurt},
              {"acf_abs_r", acf_abs.values},
              {"acf_r", acf_raw.values},
              {"acf_band", acf_abs.confidence_band},
              {"powerlaw", powerlaw}};
  write_json(cfg.output_path("analyze.json"), out);
  log << "analyze: " << s.returns.size() << " returns, outputs in " << cfg.out_dir << '\n';
  return out;
}

json run_fit(const RunConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  Rng root(cfg.seed);
  auto streams = root.split(3);
  const Source s = load_source(cfg, streams[2], log);
  const BetaPipeline data = beta_prime_pipeline(s.returns, cfg.window);
  const BEstimate best = estimate_B(data.variances, data.sigma0_sq);

  std::vector<FitResult> rows;
  rows.push_back(fit_gamma(data.beta_prime));

  const ModelParams model{data.sigma0_sq, best.B, mean(s.returns)};
  const auto model_beta = model_predicted_beta_dist(model, cfg.predict_T, cfg.window, streams[0],
                                                    cfg.burn_in);
  rows.push_back(compare_to_prediction(data.beta_prime, model_beta, Family::model_predicted,
                                       {{"B", best.B}, {"sigma0_sq", data.sigma0_sq}}, 1));

  const GarchFit g = fit_garch11(s.returns);
  const auto garch_beta = garch_predicted_beta_dist(g.params, cfg.predict_T, cfg.window,
                                                    streams[1], cfg.burn_in);
  rows.push_back(compare_to_prediction(
      data.beta_prime, garch_beta, Family::garch_predicted,
      {{"omega", g.params.omega}, {"beta", g.params.beta}, {"alpha", g.params.alpha}}, 2));

  rows.push_back(fit_lognormal(data.beta_prime));
  rows.push_back(fit_invgamma(data.beta_prime));

  const std::string label =
      !cfg.label.empty() ? cfg.label
                         : std::filesystem::path(cfg.data.empty() ? cfg.path : cfg.data).stem().string();
  json table = json::array();
  for (const auto& r : rows) {
    json row = fit_json(r);
    row["reject_5pct"] = r.gof.p_value < 0.05;
    row["reject_1pct"] = r.gof.p_value < 0.01;
    table.push_back(row);
  }
  json out = {{"config", cfg.to_json()},
              {"input", s.info},
              {"label", label},
              {"window", cfg.window},
              {"sigma0_sq", data.sigma0_sq},
              {"B", best.B},
              {"beta_prime_n", data.beta_prime.size()},
              {"columns", {"Gamma", "Model", "GARCH", "Logn", "InvGam"}},
              {"table", table}};
  write_json(cfg.output_path("table.json"), out);

  std::ostringstream txt;
  txt << "Chi-square p-values (beta' = sigma0^2 / rolling variance, window " << cfg.window
      << ")\n";
  txt << std::left << std::setw(16) << "";
  for (const auto& r : rows) txt << std::right << std::setw(10) << family_name(r.family);
  txt << '\n' << std::left << std::setw(16) << label.substr(0, 15);
  for (const auto& r : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%s", r.gof.p_value,
                  r.gof.p_value < 0.01 ? "**" : (r.gof.p_value < 0.05 ? "*" : ""));
    txt << std::right << std::setw(10) << buf;
  }
  txt << "\n\n* rejected at 5%, ** rejected at 1%\n\nParameters:\n";
  for (const auto& r : rows) {
    txt << "  " << std::left << std::setw(8) << family_name(r.family);
    for (const auto& p : r.params) txt << "  " << p.name << "=" << std::setprecision(4) << p.value;
    txt << "   (chi2=" << std::setprecision(5) << r.gof.statistic << ", dof=" << r.gof.dof << ")\n";
  }
  std::ofstream(cfg.output_path("table.txt")) << "# config: " << cfg.header_json() << '\n'
                                              << txt.str();
  log << txt.str();
  return out;
}

json run_compare(const RunConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  cfg.model.validate();
  Rng root(cfg.seed);
  auto streams = root.split(2);
  const Source data = load_source(cfg, streams[1], log);
  const PathSample sim =
      generate_path(cfg.model, cfg.predict_T, cfg.resolved_init_var(), cfg.burn_in, streams[0]);

  // Identical treatment on both sides: rolling variance, sigma0^2 from it, beta'.
  const BetaPipeline dp = beta_prime_pipeline(data.returns, cfg.window);
  const BetaPipeline mp = beta_prime_pipeline(sim.returns, cfg.window);
  const double data_mu = mean(data.returns), model_mu = mean(sim.returns);

  const AcfResult acf_data =
      acf(abs_values(normalized_returns(data.returns, dp.sigma0_sq, data_mu, 1)), cfg.max_lag);
  const AcfResult acf_model =
      acf(abs_values(normalized_returns(sim.returns, mp.sigma0_sq, model_mu, 1)), cfg.max_lag);
  const PowerLawFit pl =
      fit_powerlaw_acf(acf_data.values, cfg.powerlaw_lag_min, cfg.powerlaw_lag_max);
  std::vector<double> lags(acf_data.lags.begin(), acf_data.lags.end()), pl_curve;
  int powerlaw_above_from = -1;
  for (std::size_t k = 0; k < lags.size(); ++k) {
    pl_curve.push_back(pl.amplitude * std::pow(lags[k], -pl.exponent));
    if (pl_curve.back() > acf_model.values[k]) {
      if (powerlaw_above_from < 0) powerlaw_above_from = static_cast<int>(lags[k]);
    } else {
      powerlaw_above_from = -1;
    }
  }
  const std::string header = cfg.header_json();
  write_plot_csv(cfg.output_path("compare_acf.csv"), header,
                 {"lag", "data", "model", "powerlaw_fit"},
                 {lags, acf_data.values, acf_model.values, pl_curve});

  const EmpiricalCdf data_cdf(dp.beta_prime), model_cdf(mp.beta_prime);
  const double lo = std::min(*std::min_element(dp.beta_prime.begin(), dp.beta_prime.end()),
                             *std::min_element(mp.beta_prime.begin(), mp.beta_prime.end()));
  const double hi = std::max(*std::max_element(dp.beta_prime.begin(), dp.beta_prime.end()),
                             *std::max_element(mp.beta_prime.begin(), mp.beta_prime.end()));
  std::vector<double> grid, sd, sm;
  constexpr int kGrid = 200;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / kGrid);
    grid.push_back(x);
    sd.push_back(1.0 - data_cdf(x));
    sm.push_back(1.0 - model_cdf(x));
  }
  write_plot_csv(cfg.output_path("compare_survival.csv"), header,
                 {"beta_prime", "data_survival", "model_survival"}, {grid, sd, sm});

  json kurt = json::array();
  for (int dt : cfg.delta_t) {
    const auto rd = normalized_returns(data.returns, dp.sigma0_sq, data_mu, dt);
    const auto rm = normalized_returns(sim.returns, mp.sigma0_sq, model_mu, dt);
    if (rd.size() < 4 || rm.size() < 4) continue;
    kurt.push_back({{"delta_t", dt},
                    {"data", excess_kurtosis(rd)},
                    {"model", excess_kurtosis(rm)}});
  }
  const KsResult ks = ks_two_sample(dp.beta_prime, mp.beta_prime);
  const FitResult chi = compare_to_prediction(dp.beta_prime, mp.beta_prime,
                                              Family::model_predicted, {{"B", cfg.model.B}}, 1);
  json out = {{"config", cfg.to_json()},
              {"input", data.info},
              {"data_sigma0_sq", dp.sigma0_sq},
              {"model_sigma0_sq", mp.sigma0_sq},
              {"beta_prime_ks", {{"statistic", ks.statistic}, {"p_value", ks.p_value}}},
              {"beta_prime_chi_square", fit_json(chi)},
              {"kurtosis", kurt},
              {"powerlaw",
               {{"amplitude", pl.amplitude},
                {"exponent", pl.exponent},
                {"lag_min", pl.lag_min},
                {"lag_max", pl.lag_max},
                {"above_model_from_lag", powerlaw_above_from}}}};
  write_json(cfg.output_path("compare.json"), out);
  log << "compare: beta' KS D=" << ks.statistic << " p=" << ks.p_value << '\n';
  return out;
}

json run_command(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "simulate") return run_simulate(cfg, log);
  if (cfg.command == "mechanism") return run_mechanism(cfg, log);
  if (cfg.command == "estimate") return run_estimate(cfg, log);
  if (cfg.command == "analyze") return run_analyze(cfg, log);
  if (cfg.command == "fit") return run_fit(cfg, log);
  if (cfg.command == "compare") return run_compare(cfg, log);
  throw ValidationError("unknown command '" + cfg.command + "'");
}

}  // namespace sfvol
