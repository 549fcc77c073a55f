#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace matchrobust::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 2,
  kGuardExceeded = 3,
  kIoError = 4,
};

/// Runs the command line `args` (without the program name). Normal output goes
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matchrobust::cli
