#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sfvol/commands.hpp"
#include "sfvol/config.hpp"
#include "sfvol/error.hpp"
#include "sfvol/estimation.hpp"
#include "sfvol/garch.hpp"
#include "sfvol/io.hpp"
#include "sfvol/mechanism.hpp"
#include "sfvol/model.hpp"
#include "sfvol/stats.hpp"

namespace py = pybind11;
using namespace sfvol;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::span<const double> view(const Array& a) {
  if (a.ndim() != 1) throw DomainError("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

py::dict fit_dict(const FitResult& f) {
  py::dict params;
  for (const auto& p : f.params) params[py::str(p.name)] = p.value;
  py::dict d;
  d["family"] = family_name(f.family);
  d["params"] = params;
  d["n"] = f.n;
  d["chi_square"] = f.gof.statistic;
  d["dof"] = f.gof.dof;
  d["bins"] = f.gof.bins;
  d["p_value"] = f.gof.p_value;
  d["warnings"] = f.gof.warnings;
  return d;
}

py::object from_json(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic feedback volatility model: simulation, estimation and statistics";

  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "generate_path",
      [](double sigma0_sq, double B, std::size_t T, double mu, std::uint64_t seed, std::size_t burn_in,
         std::optional<double> init_var) {
        Rng rng(seed);
        const ModelParams p{sigma0_sq, B, mu};
        const auto path = generate_path(p, T, init_var.value_or(sigma0_sq), burn_in, rng);
        return py::make_tuple(to_numpy(path.variance), to_numpy(path.returns));
      },
      py::arg("sigma0_sq") = 1e-4, py::arg("B") = 100.0, py::arg("T") = 100000, py::arg("mu") = 0.0,
      py::arg("seed") = 42, py::arg("burn_in") = kDefaultBurnIn, py::arg("init_var") = py::none(),
      "Simulate the model; returns (variance, returns).");

  m.def(
      "sample_stationary_beta",
      [](double B, std::size_t n, std::size_t thin, std::uint64_t seed) {
        Rng rng(seed);
        return to_numpy(sample_stationary_beta(B, n, thin, kDefaultBurnIn, rng));
      },
      py::arg("B"), py::arg("n"), py::arg("thin") = 0, py::arg("seed") = 42,
      "Nearly independent draws of the stationary normalized inverse variance.");

  m.def("decorrelation_lag", &decorrelation_lag, py::arg("B"), py::arg("max_corr") = 0.01);

  m.def(
      "aggregate_returns",
      [](const Array& r, int dt) { return to_numpy(aggregate_returns(view(r), dt)); },
      py::arg("returns"), py::arg("delta_t"));

  m.def(
      "verify_reduction",
      [](double B, std::size_t T, double sigma0_sq, std::uint64_t seed, std::optional<double> lambda_e,
         std::size_t thin) {
        Rng rng(seed);
        ReductionOptions opt;
        opt.thin = thin;
        opt.lambda_e = lambda_e;
        const auto r = verify_reduction({sigma0_sq, B, 0.0}, T, rng, opt);
        py::dict d;
        d["lambda_e"] = r.lambda_e;
        d["samples"] = r.samples;
        d["thin"] = r.thin;
        d["ks_statistic"] = r.ks_statistic;
        d["ks_p_value"] = r.ks_p_value;
        d["max_acf_abs_diff"] = r.max_acf_abs_diff;
        return d;
      },
      py::arg("B"), py::arg("T"), py::arg("sigma0_sq") = 1e-4, py::arg("seed") = 42,
      py::arg("lambda_e") = py::none(), py::arg("thin") = 0,
      "Compare the order-flow mechanism with the model (two-sample KS on stationary variances).");

  m.def(
      "rolling_variance",
      [](const Array& r, int window) { return to_numpy(rolling_variance(view(r), window).values); },
      py::arg("returns"), py::arg("window") = kDefaultWindow);
  m.def(
      "estimate_sigma0", [](const Array& v) { return estimate_sigma0(view(v)); }, py::arg("variances"));
  m.def(
      "estimate_B",
      [](const Array& v, double s0) {
        const auto b = estimate_B(view(v), s0);
        py::dict d;
        d["B"] = b.B;
        d["objective"] = b.objective;
        d["local_minima"] = b.local_minima;
        d["at_boundary"] = b.at_boundary;
        return d;
      },
      py::arg("variances"), py::arg("sigma0_sq"));
  m.def(
      "beta_prime_pipeline",
      [](const Array& r, int window) {
        const auto p = beta_prime_pipeline(view(r), window);
        py::dict d;
        d["variances"] = to_numpy(p.variances.values);
        d["first"] = p.variances.first;
        d["sigma0_sq"] = p.sigma0_sq;
        d["beta_prime"] = to_numpy(p.beta_prime);
        return d;
      },
      py::arg("returns"), py::arg("window") = kDefaultWindow);

  m.def("fit_gamma", [](const Array& x) { return fit_dict(fit_gamma(view(x))); }, py::arg("samples"));
  m.def("fit_lognormal", [](const Array& x) { return fit_dict(fit_lognormal(view(x))); }, py::arg("samples"));
  m.def("fit_invgamma", [](const Array& x) { return fit_dict(fit_invgamma(view(x))); }, py::arg("samples"));

  m.def(
      "simulate_garch",
      [](double omega, double beta, double alpha, std::size_t T, std::uint64_t seed) {
        Rng rng(seed);
        return to_numpy(simulate_garch({omega, beta, alpha}, T, rng));
      },
      py::arg("omega") = 1.3e-6, py::arg("beta") = 0.90, py::arg("alpha") = 0.089, py::arg("T") = 100000,
      py::arg("seed") = 42);
  m.def(
      "fit_garch11",
      [](const Array& r) {
        const auto f = fit_garch11(view(r));
        py::dict d;
        d["omega"] = f.params.omega;
        d["beta"] = f.params.beta;
        d["alpha"] = f.params.alpha;
        d["log_likelihood"] = f.log_likelihood;
        d["iterations"] = f.iterations;
        d["restarts"] = f.restarts;
        return d;
      },
      py::arg("returns"), "Gaussian quasi-MLE of GARCH(1,1).");

  m.def(
      "acf", [](const Array& x, int max_lag) { return to_numpy(acf(view(x), max_lag).values); },
      py::arg("series"), py::arg("max_lag"), "Sample autocorrelation at lags 1..max_lag.");
  m.def("excess_kurtosis", [](const Array& x) { return excess_kurtosis(view(x)); }, py::arg("samples"));
  m.def(
      "ks_two_sample",
      [](const Array& a, const Array& b) {
        const auto r = ks_two_sample(view(a), view(b));
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("a"), py::arg("b"));
  m.def("student_t_density", &student_t_density, py::arg("x"), py::arg("dof"), py::arg("scale") = 1.0);

  m.def(
      "load_price_csv",
      [](const std::string& path, const std::string& date_column, const std::string& price_column,
         const std::string& date_format) {
        const auto p = load_price_csv(path, {date_column, price_column, date_format});
        std::vector<std::string> dates;
        for (auto d : p.dates) dates.push_back(format_date(d));
        py::dict d;
        d["dates"] = dates;
        d["closes"] = to_numpy(p.closes);
        d["dropped_missing"] = p.dropped_missing;
        d["dropped_nonpositive"] = p.dropped_nonpositive;
        d["skipped_unparseable"] = p.skipped_unparseable;
        d["warnings"] = p.warnings;
        return d;
      },
      py::arg("path"), py::arg("date_column") = "date", py::arg("price_column") = "close",
      py::arg("date_format") = "%Y-%m-%d");
  m.def("log_returns", [](const Array& c) { return to_numpy(log_returns(view(c))); }, py::arg("closes"));

  m.def(
      "run",
      [](const std::string& command, const std::map<std::string, std::string>& values) {
        const auto cfg = resolve_config(command, values);
        std::ostringstream log;
        return from_json(run_command(cfg, log));
      },
      py::arg("command"), py::arg("config") = std::map<std::string, std::string>{},
      "Run a CLI command with string-valued config keys; returns its JSON summary.");
  m.def("config_keys", [] {
    py::dict d;
    for (const auto& k : config_keys()) d[py::str(k.name)] = k.default_value;
    return d;
  });
}
