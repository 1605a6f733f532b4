#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace signfull {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Runs the command line `args` (without the program name). CSV goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace signfull
