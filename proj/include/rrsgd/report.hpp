#pragma once

#include <map>
#include <string>
#include <vector>

#include "rrsgd/analysis.hpp"
#include "rrsgd/verify.hpp"

namespace rrsgd {

inline constexpr const char* kToolVersion = "rrsgd 0.1.0";

// Every emitted CSV starts with "# rrsgd <version> seed=<seed>".
std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows,
                              std::uint64_t master_seed);
std::string recurrence_rows_to_csv(const std::vector<RecurrenceCheckRow>& rows,
                                   std::uint64_t seed);
std::string progress_rows_to_csv(const std::vector<ProgressCheckRow>& rows,
                                 std::uint64_t seed);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // throws if absent
};

// Parses a CSV with optional leading '#' comment lines. Throws
// std::runtime_error with a line number on malformed input.
CsvTable parse_csv(const std::string& text);

struct GroupedFit {
  std::map<std::string, std::string> group;  // group_by column -> value
  RateFit fit;
};

// Groups rows by the named columns and fits log(value) against log(scale)
// within each group.
std::vector<GroupedFit> fit_csv(const CsvTable& table,
                                const std::vector<std::string>& group_by,
                                const std::string& scale_column,
                                const std::string& value_column);

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), both positive
};

// Minimal hand-rolled log-log line chart: axes, ticks, series, legend.
std::string svg_loglog_chart(const std::vector<SvgSeries>& series,
                             const std::string& x_label,
                             const std::string& y_label, int width = 640,
                             int height = 480);

}  // namespace rrsgd
