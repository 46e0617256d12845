#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfvol/io.hpp"
#include "sfvol/model.hpp"

namespace sfvol {

/// Every knob of a CLI run. Filled from a flat `key = value` file, then
/// command-line overrides; the resolved values are written into the header
/// of each output so any run can be replayed from its own output.
struct RunConfig {
  std::string command;

  ModelParams model{};
  std::uint64_t T = 100'000;
  std::uint64_t burn_in = kDefaultBurnIn;
  double init_var = 0.0;  // 0: start at sigma0_sq
  std::uint64_t seed = 42;
  int window = 42;
  std::vector<int> delta_t{1, 10, 100, 1000};
  int max_lag = 100;
  int bins = 60;
  int powerlaw_lag_min = 1;
  int powerlaw_lag_max = 100;
  double lambda_e = 0.0;  // 0: B + 1
  std::uint64_t thin = 0; // 0: automatic decorrelation spacing
  std::uint64_t predict_T = 1'000'000;

  std::string out_dir = ".";
  std::string prefix;
  std::string data;  // price CSV
  std::string path;  // simulated path CSV (t,variance,return)
  CsvSchema schema{};
  std::string label;

  double resolved_init_var() const { return init_var > 0.0 ? init_var : model.sigma0_sq; }
  double resolved_lambda_e() const { return lambda_e > 0.0 ? lambda_e : model.B + 1.0; }
  std::string output_path(const std::string& name) const;

  nlohmann::json to_json() const;
  std::string header_json() const;  // compact single-line form used in file headers
};

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

/// All recognised keys, in header order.
const std::vector<ConfigKey>& config_keys();

/// Parses `key = value` lines; `#` starts a comment. Throws ValidationError
/// listing every malformed line.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Key/value pairs recovered from the config header of an emitted CSV or JSON file.
std::map<std::string, std::string> read_replay_file(const std::string& path);

/// Builds and validates a RunConfig for `command`. Unknown keys, unparseable
/// values and violated preconditions are all collected into one ValidationError.
RunConfig resolve_config(const std::string& command,
                         const std::map<std::string, std::string>& values);

}  // namespace sfvol
