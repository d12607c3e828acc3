#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divstab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalidInstance = 2,
  kExitUnstable = 3,
  kExitDisagreement = 4,
};

/// Runs the tool on `args` (without the program name). Results go to `out`,
/// diagnostics to `err` as JSON lines.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divstab
