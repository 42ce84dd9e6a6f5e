#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tfalg::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailed = 1,        ///< ran, but did not converge or did not pass
  kParse = 2,         ///< bad flags or malformed input files
  kPrecondition = 3,  ///< precondition, singular operator, failed certificate
  kResource = 4       ///< term cap or grid cap exceeded
};

/// Runs `tfalg <args...>` (args exclude the program name). JSON results go to
/// `out`, diagnostics and a short human summary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tfalg::cli
