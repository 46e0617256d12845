#include "sfvol/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sfvol/error.hpp"

namespace sfvol {

namespace {

const std::set<std::string> kCommands = {"simulate", "mechanism", "estimate",
                                         "analyze",  "fit",       "compare"};
// Header fields that describe a run but are not settable keys.
const std::set<std::string> kMetaKeys = {"command", "missing_data_policy", "version"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

class Parser {
 public:
  explicit Parser(const std::map<std::string, std::string>& v) : values_(v) {}

  double real(const std::string& key) {
    const std::string& s = values_.at(key);
    double out = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(out))
      errors.push_back(key + ": expected a finite number, got '" + s + "'");
    return out;
  }

  template <typename Int>
  Int integer(const std::string& key) {
    const std::string& s = values_.at(key);
    Int out{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size()) {
      // allow 1e6-style literals for counts
      double d = 0.0;
      auto [p2, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
      if (ec2 == std::errc() && p2 == s.data() + s.size() && d >= 0 && d == std::floor(d) &&
          d < 9.0e18)
        return static_cast<Int>(d);
      errors.push_back(key + ": expected an integer, got '" + s + "'");
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key) {
    std::vector<int> out;
    std::stringstream ss(values_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      int v = 0;
      auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || p != item.data() + item.size()) {
        errors.push_back(key + ": expected comma-separated integers, got '" + values_.at(key) + "'");
        return {};
      }
      out.push_back(v);
    }
    return out;
  }

  const std::string& text(const std::string& key) { return values_.at(key); }

  std::vector<std::string> errors;

 private:
  const std::map<std::string, std::string>& values_;
};

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"sigma0_sq", "1e-4", "equilibrium daily variance"},
      {"B", "100", "feedback parameter (> 1)"},
      {"mu", "0", "daily drift of log returns"},
      {"T", "100000", "simulated days (mechanism: stationary KS samples)"},
      {"burn_in", "10000", "steps discarded before collecting"},
      {"init_var", "0", "initial variance; 0 starts at sigma0_sq"},
      {"seed", "42", "RNG seed"},
      {"window", "42", "rolling variance window (days)"},
      {"delta_t", "1,10,100,1000", "aggregation intervals for return PDFs"},
      {"max_lag", "100", "largest ACF lag"},
      {"bins", "60", "histogram bins"},
      {"powerlaw_lag_min", "1", "first lag of the power-law ACF fit"},
      {"powerlaw_lag_max", "100", "last lag of the power-law ACF fit"},
      {"lambda_e", "0", "exogenous Poisson rate; 0 uses B + 1"},
      {"thin", "0", "spacing of stationary samples; 0 is automatic"},
      {"predict_T", "1000000", "simulated days behind predicted distributions"},
      {"out_dir", ".", "output directory"},
      {"prefix", "", "output file name prefix"},
      {"data", "", "daily price CSV"},
      {"path", "", "simulated path CSV written by `simulate`"},
      {"date_column", "date", "date column of the price CSV"},
      {"price_column", "close", "price column of the price CSV"},
      {"date_format", "%Y-%m-%d", "date format of the price CSV"},
      {"label", "", "label for the price series"},
  };
  return keys;
}

std::string RunConfig::output_path(const std::string& name) const {
  return (std::filesystem::path(out_dir) / (prefix + name)).string();
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["sigma0_sq"] = model.sigma0_sq;
  j["B"] = model.B;
  j["mu"] = model.mu;
  j["T"] = T;
  j["burn_in"] = burn_in;
  j["init_var"] = init_var;
  j["seed"] = seed;
  j["window"] = window;
  j["delta_t"] = delta_t;
  j["max_lag"] = max_lag;
  j["bins"] = bins;
  j["powerlaw_lag_min"] = powerlaw_lag_min;
  j["powerlaw_lag_max"] = powerlaw_lag_max;
  j["lambda_e"] = lambda_e;
  j["thin"] = thin;
  j["predict_T"] = predict_T;
  j["out_dir"] = out_dir;
  j["prefix"] = prefix;
  j["data"] = data;
  j["path"] = path;
  j["date_column"] = schema.date_column;
  j["price_column"] = schema.price_column;
  j["date_format"] = schema.date_format;
  j["label"] = label;
  j["missing_data_policy"] = "skip-and-log: missing or non-positive prices dropped; "
                             "calendar gaps treated as consecutive trading days";
  return j;
}

std::string RunConfig::header_json() const { return to_json().dump(); }

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') continue;  // section headers are ignored
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    out[key] = value;
  }
  if (!errors.empty()) {
    std::string msg = "config file errors:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::map<std::string, std::string> read_replay_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open replay file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  nlohmann::json j;
  try {
    if (trim(content).rfind('{', 0) == 0) {
      j = nlohmann::json::parse(content).at("config");
    } else {
      j = nlohmann::json::parse(read_config_header(path));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot read config header of " + path + ": " + e.what());
  }
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (kMetaKeys.count(key)) continue;
    if (value.is_string()) {
      out[key] = value.get<std::string>();
    } else if (value.is_array()) {
      out[key] = join(value.get<std::vector<int>>());
    } else {
      out[key] = value.dump();
    }
  }
  return out;
}

RunConfig resolve_config(const std::string& command,
                         const std::map<std::string, std::string>& values) {
  std::vector<std::string> errors;
  if (!kCommands.count(command)) errors.push_back("unknown command '" + command + "'");

  std::map<std::string, std::string> merged;
  for (const auto& k : config_keys()) merged[k.name] = k.default_value;
  for (const auto& [k, v] : values) {
    if (kMetaKeys.count(k)) continue;
    if (!merged.count(k)) {
      errors.push_back("unknown key '" + k + "'");
      continue;
    }
    merged[k] = v;
  }

  Parser p(merged);
  RunConfig c;
  c.command = command;
  c.model.sigma0_sq = p.real("sigma0_sq");
  c.model.B = p.real("B");
  c.model.mu = p.real("mu");
  c.T = p.integer<std::uint64_t>("T");
  c.burn_in = p.integer<std::uint64_t>("burn_in");
  c.init_var = p.real("init_var");
  c.seed = p.integer<std::uint64_t>("seed");
  c.window = p.integer<int>("window");
  c.delta_t = p.int_list("delta_t");
  c.max_lag = p.integer<int>("max_lag");
  c.bins = p.integer<int>("bins");
  c.powerlaw_lag_min = p.integer<int>("powerlaw_lag_min");
  c.powerlaw_lag_max = p.integer<int>("powerlaw_lag_max");
  c.lambda_e = p.real("lambda_e");
  c.thin = p.integer<std::uint64_t>("thin");
  c.predict_T = p.integer<std::uint64_t>("predict_T");
  c.out_dir = p.text("out_dir");
  c.prefix = p.text("prefix");
  c.data = p.text("data");
  c.path = p.text("path");
  c.schema.date_column = p.text("date_column");
  c.schema.price_column = p.text("price_column");
  c.schema.date_format = p.text("date_format");
  c.label = p.text("label");
  errors.insert(errors.end(), p.errors.begin(), p.errors.end());

  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  require(c.model.sigma0_sq > 0.0, "sigma0_sq must be > 0");
  require(c.model.B > 1.0, "B must be > 1");
  require(c.T >= 1, "T must be >= 1");
  require(c.init_var >= 0.0, "init_var must be >= 0 (0 means sigma0_sq)");
  require(c.window >= 2, "window must be >= 2");
  require(!c.delta_t.empty(), "delta_t must list at least one interval");
  for (int dt : c.delta_t) require(dt >= 1, "delta_t entries must be >= 1");
  require(c.max_lag >= 1, "max_lag must be >= 1");
  require(c.bins >= 1, "bins must be >= 1");
  require(c.powerlaw_lag_min >= 1 && c.powerlaw_lag_min <= c.powerlaw_lag_max,
          "need 1 <= powerlaw_lag_min <= powerlaw_lag_max");
  require(c.powerlaw_lag_max <= c.max_lag, "powerlaw_lag_max must not exceed max_lag");
  require(c.lambda_e == 0.0 || c.lambda_e > 1.0, "lambda_e must be 0 (use B + 1) or > 1");
  require(c.predict_T >= static_cast<std::uint64_t>(std::max(c.window, 2)) * 10,
          "predict_T must be at least 10 windows long");
  require(!c.schema.date_format.empty(), "date_format must not be empty");

  const bool needs_series = command == "estimate" || command == "fit" || command == "compare";
  if (needs_series) require(!c.data.empty() || !c.path.empty(), command + " needs `data` or `path`");
  if (command == "compare") require(!c.data.empty(), "compare needs a price CSV in `data`");
  require(c.data.empty() || c.path.empty(), "set at most one of `data` and `path`");
  if (command == "analyze" && c.data.empty() && c.path.empty())
    require(c.T > 4 * static_cast<std::uint64_t>(std::max(c.max_lag, 1)),
            "T must exceed 4 * max_lag for the ACF");
  if (command == "mechanism")
    require(c.T > 4 * 50, "mechanism needs T > 200 for the lag-50 ACF comparison");

  if (!errors.empty()) {
    std::string msg = "invalid configuration (" + std::to_string(errors.size()) + " problem" +
                      (errors.size() == 1 ? "" : "s") + "):";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ValidationError(msg);
  }
  return c;
}

}  // namespace sfvol
