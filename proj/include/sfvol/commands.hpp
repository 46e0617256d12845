#pragma once

#include <ostream>

#include <json.hpp>

#include "sfvol/config.hpp"

namespace sfvol {

// Each command writes its files under cfg.out_dir and returns the JSON summary
// it also prints or saves. Errors surface as DomainError / ValidationError,
// DataError and NumericalError.

/// simulate.csv: t, variance, return.
nlohmann::json run_simulate(const RunConfig& cfg, std::ostream& log);

/// mechanism.csv (one row per mechanism step) and reduction.json.
nlohmann::json run_mechanism(const RunConfig& cfg, std::ostream& log);

/// estimate.json: sigma0^2, B and diagnostics for a price or path CSV.
nlohmann::json run_estimate(const RunConfig& cfg, std::ostream& log);

/// acf.csv, beta_hist.csv, beta_hist_log.csv, beta_survival.csv,
/// returns_pdf.csv and analyze.json.
nlohmann::json run_analyze(const RunConfig& cfg, std::ostream& log);

/// table.json and table.txt: the five-column goodness-of-fit table.
nlohmann::json run_fit(const RunConfig& cfg, std::ostream& log);

/// compare_acf.csv, compare_survival.csv and compare.json.
nlohmann::json run_compare(const RunConfig& cfg, std::ostream& log);

nlohmann::json run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace sfvol
