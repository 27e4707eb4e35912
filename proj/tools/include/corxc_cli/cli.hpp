#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corxc::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kIo = 3,
  kValidation = 4,
};

/// Runs one invocation. args excludes the program name. Reports go to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corxc::cli
