#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qrgg {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
  kExitAuditViolation = 3,
};

/// Runs the command-line tool. `args` excludes the program name. Reports go
/// to `out`, diagnostics (including the resolved configuration) to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qrgg
