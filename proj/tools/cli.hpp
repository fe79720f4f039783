#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smalldev::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,      // bad flags, failed validation
  kDomain = 3,     // argument outside a function's domain
  kDivergent = 4,  // supercritical series rejected
};

/// Runs the command line `args` (program name excluded). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smalldev::cli
