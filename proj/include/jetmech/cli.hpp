#pragma once

// Batch commands behind the jetmech executable.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jetmech/config.hpp"

namespace jetmech {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInput = 2 };

struct RunOptions {
  std::filesystem::path out = ".";
  /// Replaces the default tolerance of every check when set.
  std::optional<double> tolerance;
};

const std::vector<std::string>& command_names();

/// Runs one command, writing artifacts under options.out and a human summary
/// to `log`. Returns the exit code; errors from the library are mapped to
/// kExitInput (bad input) or kExitFail and reported on `log`.
int run_command(const std::string& command, const SystemConfig& config, const RunOptions& options,
                std::ostream& log);

}  // namespace jetmech
