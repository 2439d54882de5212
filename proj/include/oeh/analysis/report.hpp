#pragma once

// CSV and JSON outputs for solves and sweeps. Numbers use the shortest text that reads back
// to the same double, so files are byte-deterministic and re-parse exactly.

#include <filesystem>
#include <string>
#include <vector>

#include "oeh/analysis/sweep.hpp"

namespace oeh::analysis {

/// Fixed column order of the sweep CSV.
const std::vector<std::string>& sweep_columns();

/// One line per row; numeric cells of infeasible rows are left empty.
std::string format_sweep_csv(const std::vector<SweepRow>& rows);
/// Inverse of format_sweep_csv (capacities are not part of this file). Throws io::ParseError.
std::vector<SweepRow> parse_sweep_csv(const std::string& text, const std::string& source = "<sweep>");

/// Columns parameter, cluster, technology, location, value; rows in sweep order.
std::string format_capacities_csv(const std::vector<SweepRow>& rows);
/// Fills the capacities of `rows` (matched by parameter order) from the CSV text.
void parse_capacities_csv(const std::string& text, std::vector<SweepRow>& rows, const std::string& source = "<capacities>");

/// Sweep metadata and per-point solver statistics.
std::string sweep_summary_json(const SweepResult& result);
std::string solve_report_json(const SolveReport& report, const std::string& system_name);
/// Columns cluster, technology, location, value.
std::string format_solve_capacities_csv(const SolveReport& report);

/// Writes <stem>.csv, <stem>_capacities.csv and <stem>_summary.json into dir (created if
/// needed). Throws io::IoError.
void write_sweep_report(const SweepResult& result, const std::filesystem::path& dir, const std::string& stem);

}  // namespace oeh::analysis
