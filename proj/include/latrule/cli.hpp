#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latrule::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInvalidArgument = 2, kResourceLimit = 3 };

/// Runs one subcommand. `args` excludes the program name. Data goes to `out`
/// (or --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latrule::cli
