#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridshare::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kValidation = 3,
  kInfeasible = 4,
  kTimeLimit = 5,
};

/// Environment variable naming the output directory when neither --out nor
/// the config provides one.
inline constexpr const char* kOutputEnv = "GRIDSHARE_OUT";

/// Runs one command line (args excludes the program name) and returns the
/// process exit status. Progress goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gridshare::cli
