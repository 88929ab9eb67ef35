#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hexens::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kRuntimeError = 2 };

/// Parses `args` (without the program name) and runs the requested
/// experiment. Summaries go to `out`, diagnostics and usage to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hexens::cli
