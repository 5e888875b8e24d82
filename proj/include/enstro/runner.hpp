#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "enstro/diagnostics.hpp"
#include "enstro/run_config.hpp"

namespace enstro {

struct RunResult {
  std::vector<DiagnosticsRecord> history;  ///< one record per time level
  FlowState final_state;
  double max_cfl = 0.0;
  std::vector<std::filesystem::path> snapshots;
};

/// Projected initial state of a configuration.
FlowState initial_state(const RunConfig& c);

/// Throws ConfigError unless the snapshot's grid, K and map match the configuration.
void check_compatible(const FlowState& snapshot, const RunConfig& c);

/// Time loop with diagnostics. Starts from `start` (a snapshot) when given,
/// otherwise from initial_state(c). Writes the CSV and snapshots named in c;
/// an empty csv path skips the file.
RunResult run_simulation(const RunConfig& c, const std::optional<FlowState>& start = std::nullopt);

/// Column names, comma separated, no newline.
std::string csv_header();
void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& history);

}  // namespace enstro
