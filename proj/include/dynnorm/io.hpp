#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynnorm/fitting.hpp"
#include "dynnorm/simulation.hpp"
#include "dynnorm/verification.hpp"

namespace dynnorm {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Malformed CSV input; row() is the 1-based line number (header is line 1).
class CsvError : public std::runtime_error {
public:
  CsvError(std::size_t row, const std::string& what);
  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

/// Columns s,channel,x,y,is_outlier; channel is zero-based; LF line endings.
void write_scenario_csv(std::ostream& os, const OutlierScenario& scenario);

/// Generic numeric table with a header row.
void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

struct FitInput {
  std::vector<FitPoint> points;
  bool labelled = false;          // the file carried an is_outlier column
  std::size_t channel_count = 0;  // max(channel) + 1 when a channel column exists
};

/// Reads either a plain x,y CSV or a scenario CSV. Scenario rows are
/// filtered to is_outlier = 1. Throws CsvError on malformed or empty input.
FitInput read_fit_csv(std::istream& is);

nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const FitResult& result);

}  // namespace dynnorm
