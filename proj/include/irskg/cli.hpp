#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace irskg {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Runs the `irskg` command line. `args` excludes the program name.
/// Machine-readable JSON goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irskg
