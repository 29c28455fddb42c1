#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pirkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitUsage = 2,
  kExitEmptyDenominator = 3,
};

/// Runs one `pirkit` invocation. `args` excludes the program name. Normal
/// output goes to `out`, diagnostics to `err`; the return value is the exit
/// status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pirkit::cli
