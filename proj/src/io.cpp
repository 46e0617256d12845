#include "sfvol/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "sfvol/error.hpp"

namespace sfvol {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

bool is_missing_marker(const std::string& s) {
  static const char* kMarkers[] = {"", ".", "na", "n/a", "#n/a", "nan", "null", "none", "-"};
  const std::string l = lower(s);
  return std::any_of(std::begin(kMarkers), std::end(kMarkers), [&](const char* m) { return l == m; });
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_date(const std::string& s, const std::string& format, std::chrono::sys_days& out) {
  std::tm tm{};
  std::istringstream in(s);
  in >> std::get_time(&tm, format.c_str());
  if (in.fail()) return false;
  in >> std::ws;
  if (!in.eof()) return false;
  using namespace std::chrono;
  const year_month_day ymd{year{tm.tm_year + 1900}, month{static_cast<unsigned>(tm.tm_mon + 1)},
                           day{static_cast<unsigned>(tm.tm_mday)}};
  if (!ymd.ok()) return false;
  out = sys_days{ymd};
  return true;
}

std::ptrdiff_t find_column(const std::vector<std::string>& header, const std::string& name) {
  const std::string want = lower(name);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (lower(header[i]) == want) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

}  // namespace

PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema,
                           const std::string& label) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open price file: " + path);

  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (trim(line).empty() || line.front() == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw DataError("price file has no header line: " + path);

  std::ptrdiff_t date_col = find_column(header, schema.date_column);
  if (date_col < 0) date_col = find_column(header, "observation_date");
  if (date_col < 0) date_col = 0;
  std::ptrdiff_t price_col = find_column(header, schema.price_column);
  if (price_col < 0 && header.size() == 2) price_col = date_col == 0 ? 1 : 0;
  if (price_col < 0) {
    std::string cols;
    for (const auto& h : header) cols += (cols.empty() ? "" : ", ") + h;
    throw DataError("price column '" + schema.price_column + "' not found in " + path +
                    " (columns: " + cols + ")");
  }

  PriceSeries out;
  out.source_label = label.empty() ? path : label;
  std::vector<std::pair<std::chrono::sys_days, double>> rows;
  std::size_t line_no = 1;
  std::string first_bad;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    ++out.rows_read;
    const auto fields = split_csv_line(line);
    const auto need = static_cast<std::size_t>(std::max(date_col, price_col));
    std::chrono::sys_days date;
    if (fields.size() <= need || !parse_date(fields[date_col], schema.date_format, date)) {
      ++out.skipped_unparseable;
      if (first_bad.empty()) first_bad = "line " + std::to_string(line_no) + ": " + line;
      continue;
    }
    const std::string& price_text = fields[price_col];
    if (is_missing_marker(price_text)) {
      ++out.dropped_missing;
      continue;
    }
    double price = 0.0;
    if (!parse_double(price_text, price)) {
      ++out.skipped_unparseable;
      if (first_bad.empty()) first_bad = "line " + std::to_string(line_no) + ": " + line;
      continue;
    }
    if (!(price > 0.0)) {
      ++out.dropped_nonpositive;
      continue;
    }
    rows.emplace_back(date, price);
  }

  if (out.skipped_unparseable > 0) {
    const double frac = static_cast<double>(out.skipped_unparseable) /
                        static_cast<double>(std::max<std::size_t>(out.rows_read, 1));
    std::ostringstream msg;
    msg << out.skipped_unparseable << " of " << out.rows_read << " rows unparseable in " << path
        << " (first: " << first_bad << ")";
    if (frac > 0.01) throw DataError(msg.str());
    out.warnings.push_back(msg.str());
  }
  if (out.dropped_missing > 0)
    out.warnings.push_back(std::to_string(out.dropped_missing) + " rows with missing prices dropped");
  if (out.dropped_nonpositive > 0)
    out.warnings.push_back(std::to_string(out.dropped_nonpositive) +
                           " rows with non-positive prices dropped");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].first == rows[i - 1].first)
      throw DataError("duplicate date " + format_date(rows[i].first) + " in " + path);

  out.dates.reserve(rows.size());
  out.closes.reserve(rows.size());
  for (const auto& [d, p] : rows) {
    out.dates.push_back(d);
    out.closes.push_back(p);
  }
  return out;
}

std::vector<double> log_returns(std::span<const double> closes) {
  if (closes.size() < 2) throw DataError("log_returns: need at least two prices");
  std::vector<double> out(closes.size() - 1);
  for (std::size_t i = 0; i + 1 < closes.size(); ++i) {
    if (!(closes[i] > 0.0) || !(closes[i + 1] > 0.0))
      throw DataError("log_returns: prices must be positive");
    out[i] = std::log(closes[i + 1]) - std::log(closes[i]);
  }
  return out;
}

std::string format_date(std::chrono::sys_days d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

void write_plot_csv(const std::string& path, const std::string& config_json,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw DomainError("write_plot_csv: header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw DomainError("write_plot_csv: columns differ in length");

  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "# config: " << config_json << '\n';
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", columns[j][i]);
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("error while writing " + path);
}

CsvTable read_plot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  CsvTable t;
  std::string line;
  const std::string tag = "# config: ";
  while (std::getline(in, line)) {
    if (line.rfind(tag, 0) == 0) {
      t.config_json = line.substr(tag.size());
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    t.header = split_csv_line(line);
    break;
  }
  if (t.header.empty()) throw DataError("no column header in " + path);
  std::vector<std::vector<double>> cols(t.header.size());
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != cols.size())
      throw DataError(path + ": row " + std::to_string(line_no) + " has the wrong field count");
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v))
        throw DataError(path + ": non-numeric field '" + fields[j] + "'");
      cols[j].push_back(v);
    }
  }
  for (std::size_t j = 0; j < cols.size(); ++j) t.columns[t.header[j]] = std::move(cols[j]);
  return t;
}

std::string read_config_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  const std::string tag = "# config: ";
  if (line.rfind(tag, 0) != 0) throw DataError(path + " has no '# config:' header line");
  return line.substr(tag.size());
}

}  // namespace sfvol
