#pragma once

#include <iosfwd>

namespace qmd {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInvalid = 2, kExitInfeasible = 3, kExitBadFlags = 4 };

/// Runs one command (argv[0] is the program name). JSON and CSV go to out,
/// diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmd
