#pragma once

#include "fitsd/engine.hpp"
#include "fitsd/policy.hpp"
#include "fitsd/validation.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fitsd {

// time, then stocks, flows and auxiliaries, each group alphabetical.
std::vector<std::string> csv_columns(const RunResult& result);
std::string to_csv(const RunResult& result);
void emit_csv(const RunResult& result, const std::string& path);

std::string comparison_csv(const ComparisonReport& report);

// One file per variable: time, then a column per scenario.
std::string plot_data_csv(const ComparisonReport& report, const std::string& variable);
// Self-contained line chart of the same data.
std::string plot_svg(const ComparisonReport& report, const std::string& variable);

// Variables charted by `compare`.
const std::vector<std::string>& plotted_variables();

std::string format_findings(const std::vector<Finding>& findings);
std::string format_findings(const std::vector<ValidationFinding>& findings);

// Two-column year,value file; a non-numeric first line is taken as a header.
std::vector<std::pair<double, double>> read_historical_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fitsd
