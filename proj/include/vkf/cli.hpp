#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vkf/signal_lab.hpp"

namespace vkf::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kNumericalFailure = 2 };

/// Runs the `vkf` command line. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Scenario used by `simulate` when no --scenario file is given.
lab::RunScenario default_scenario();

}  // namespace vkf::cli
