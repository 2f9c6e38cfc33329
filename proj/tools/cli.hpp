#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "datasignal/error.hpp"

namespace datasignal::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kData = 3,
  kNumeric = 4,
  kNetworkIo = 5,
};

int exit_code_for(ErrorCode code);

/// Runs the CLI with `args` (args[0] is the program name). Normal output goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace datasignal::cli
