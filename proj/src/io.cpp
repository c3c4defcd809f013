#include "dynnorm/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace dynnorm {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CsvError::CsvError(std::size_t row, const std::string& what)
    : std::runtime_error("CSV row " + std::to_string(row) + ": " + what), row_(row) {}

void write_scenario_csv(std::ostream& os, const OutlierScenario& scenario) {
  os << "s,channel,x,y,is_outlier\n";
  for (const auto& f : scenario.frames) {
    for (std::size_t k = 0; k < f.x.size(); ++k) {
      const bool outlier = f.s > 0 && k == scenario.outlier_index;
      os << f.s << ',' << k << ',' << format_double(f.x[k]) << ',' << format_double(f.y[k]) << ','
         << (outlier ? 1 : 0) << '\n';
    }
  }
}

void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t row, const char* column) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != end) {
    throw CsvError(row, std::string("cannot parse ") + column + " value '" + field + "'");
  }
  return v;
}

}  // namespace

FitInput read_fit_csv(std::istream& is) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    ++row;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw CsvError(row == 0 ? 1 : row, "empty input, expected a header row");

  auto column = [&](const char* name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto col_x = column("x");
  const auto col_y = column("y");
  const auto col_label = column("is_outlier");
  const auto col_channel = column("channel");
  if (col_x < 0 || col_y < 0) throw CsvError(row, "header must contain x and y columns");

  FitInput in;
  in.labelled = col_label >= 0;
  std::size_t data_rows = 0;
  while (std::getline(is, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw CsvError(row, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
    }
    ++data_rows;
    if (col_channel >= 0) {
      const double ch = parse_number(fields[col_channel], row, "channel");
      if (ch < 0 || ch != static_cast<double>(static_cast<std::size_t>(ch))) {
        throw CsvError(row, "channel must be a non-negative integer");
      }
      in.channel_count = std::max(in.channel_count, static_cast<std::size_t>(ch) + 1);
    }
    if (in.labelled) {
      const auto& label = fields[col_label];
      if (label == "0") continue;
      if (label != "1") throw CsvError(row, "is_outlier must be 0 or 1, got '" + label + "'");
    }
    in.points.push_back({parse_number(fields[col_x], row, "x"), parse_number(fields[col_y], row, "y")});
  }
  if (data_rows == 0) throw CsvError(row, "no data rows");
  if (in.points.empty()) throw CsvError(row, "no rows labelled is_outlier=1");
  return in;
}

nlohmann::json to_json(const CheckResult& check) {
  return {{"name", check.name},
          {"trials", check.trials},
          {"max_abs_error", check.max_abs_error},
          {"max_rel_error", check.max_rel_error},
          {"tolerance", check.tolerance},
          {"passed", check.passed}};
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) checks.push_back(to_json(c));
  return {{"seed", report.seed}, {"verdict", report.verdict()}, {"checks", std::move(checks)}};
}

nlohmann::json to_json(const FitResult& result) {
  const auto stats = residual_stats(result);
  return {{"function_kind", to_string(result.function_kind)},
          {"parameter", result.parameter},
          {"sse", result.sse},
          {"mae", result.mae},
          {"n_points", result.n_points},
          {"measured_points", result.original_count},
          {"measured_mae", stats.mae},
          {"measured_max_abs_residual", stats.max_abs},
          {"residuals", result.residuals}};
}

}  // namespace dynnorm
