#pragma once

// Subcommand implementations behind the qcons executable. Each returns the
// process exit code: 0 success, 1 failed condition / assertion / strict
// saturation, 2 bad input.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "qcons/conditions.hpp"
#include "qcons/scenario.hpp"

namespace qcons {

struct CommandResult {
  int exit_code{0};
  std::vector<std::filesystem::path> artifacts;
};

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

/// From the QC_LOG environment variable: quiet | info (default) | debug.
LogLevel log_level_from_env();

std::string report_to_json(const ConditionReport& report);
std::string report_to_text(const ConditionReport& report);

struct RunSummary {
  double delta0_norm{0};
  double final_delta_norm{0};
  std::int64_t max_abs_symbol{0};
  std::int64_t saturation_steps{0};
  std::int64_t steps{0};
  std::int64_t jammed_samples{0};
  std::int64_t transitions{0};
  double jammed_time{0};
  std::int64_t max_consecutive_losses{0};
};

RunSummary summarize(const SimTrace& trace, const SimSetup& setup);

CommandResult cmd_check(const std::filesystem::path& scenario, const std::filesystem::path& out_dir, std::ostream& out,
                        std::ostream& err);

CommandResult cmd_simulate(const std::filesystem::path& scenario, const std::filesystem::path& out_dir, bool strict,
                           bool plot, std::ostream& out, std::ostream& err);

/// Axes: duty, gamma1, gamma2, R, seed.
CommandResult cmd_sweep(const std::filesystem::path& scenario, const std::string& axis,
                        const std::vector<std::string>& values, const std::filesystem::path& out_dir, unsigned jobs,
                        std::ostream& out, std::ostream& err);

/// example-a | example-scalar | example-scalar-unquantized.
CommandResult cmd_repro(const std::string& which, const std::filesystem::path& out_dir, std::ostream& out,
                        std::ostream& err);

/// Applies one sweep value to a copy of the scenario. Throws InvalidParams
/// for unknown axes or unusable values.
ScenarioConfig apply_axis(ScenarioConfig config, const std::string& axis, const std::string& value);

std::filesystem::path shipped_scenario_dir();

}  // namespace qcons
