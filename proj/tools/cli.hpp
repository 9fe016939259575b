#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skillaudit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kDataError = 2,
  kNoOverlap = 3,
  kSchemeInfeasible = 4,
};

/// Runs one CLI invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skillaudit::cli
