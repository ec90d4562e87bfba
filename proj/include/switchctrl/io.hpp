#pragma once

#include <string>
#include <vector>

#include "switchctrl/config.hpp"
#include "switchctrl/homotopy.hpp"

namespace swc {

/// Shortest representation that parses back to the identical double.
std::string format_double(double v);

/// Full-precision JSON serialization of a solve report (deterministic bytes
/// for identical inputs).
std::string report_to_json(const ProblemConfig& config,
                           const SolveReport& report);

std::string controls_csv(const ProblemConfig& config, const SolveReport& report);
std::string homotopy_csv(const SolveReport& report);

/// Writes controls.csv, report.json, homotopy.csv (and state.csv when the
/// config requests snapshots) into dir, creating it if needed.
void write_artifacts(const ProblemConfig& config, const SolveReport& report,
                     const std::string& dir);

std::string sweep_summary_csv(const std::vector<SweepEntry>& entries);
std::string sweep_summary_json(const std::string& parameter,
                               const std::vector<SweepEntry>& entries);

/// Per-entry artifact directories (param_value) plus summary.csv.
void write_sweep_artifacts(const ProblemConfig& config,
                           const std::string& parameter,
                           const std::vector<SweepEntry>& entries,
                           const std::string& dir);

}  // namespace swc
