#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace persnet::cli {

enum ExitCode : int { kPass = 0, kViolated = 1, kUsage = 2 };

/// Runs one command line (without the program name). Reports and exported
/// documents go to `out`, diagnostics to `err`. With `--json` every outcome,
/// errors included, is a single JSON object on `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace persnet::cli
