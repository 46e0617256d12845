#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sfvol {

struct CsvSchema {
  std::string date_column = "date";
  std::string price_column = "close";
  std::string date_format = "%Y-%m-%d";  // strptime-style
};

/// Daily closes in ascending date order.
struct PriceSeries {
  std::vector<std::chrono::sys_days> dates;
  std::vector<double> closes;
  std::string source_label;

  std::size_t rows_read = 0;
  std::size_t dropped_missing = 0;      // empty, ".", "NA", "null", ...
  std::size_t dropped_nonpositive = 0;
  std::size_t skipped_unparseable = 0;
  std::vector<std::string> warnings;

  std::size_t size() const { return closes.size(); }
};

/// Reads a `date,close`-style CSV. Column names match case-insensitively;
/// FRED exports (DATE,<SERIES> with "." for missing) and portal exports
/// (Date,Open,High,Low,Close,...) both work. Missing and non-positive prices
/// are dropped and counted. Unparseable rows are skipped with a warning unless
/// they exceed 1% of the file, which is a DataError, as is a duplicate date.
PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema = {},
                           const std::string& label = "");

/// r_t = ln p_{t+1} - ln p_t; calendar gaps count as consecutive trading days.
std::vector<double> log_returns(std::span<const double> closes);
inline std::vector<double> log_returns(const PriceSeries& prices) {
  return log_returns(prices.closes);
}

std::string format_date(std::chrono::sys_days d);

/// Plot-data CSV: `# config: <json>`, then the column header, then rows with
/// 17 significant digits.
void write_plot_csv(const std::string& path, const std::string& config_json,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& columns);

struct CsvTable {
  std::string config_json;  // payload of the `# config:` line, if any
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> columns;
};

CsvTable read_plot_csv(const std::string& path);

/// Payload of the first-line `# config: ...` header of any emitted file.
std::string read_config_header(const std::string& path);

}  // namespace sfvol
