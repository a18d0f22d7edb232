#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace escapelab {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitConstruction = 3 };

/// Runs one command; args excludes the program name. Reports go to out unless an output
/// file is named, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace escapelab
