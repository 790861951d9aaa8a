#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace signlasso::cli {

/// Process exit codes. Stable across releases.
enum ExitCode : int {
  kOk = 0,
  kError = 1,          ///< I/O, parse or configuration failure
  kMaxSweeps = 2,      ///< fit: solver stopped at max_sweeps
  kChecksFailed = 3,   ///< check: some evaluated condition fails
  kSingularBlock = 4,  ///< check: C11 is singular
};

/// Runs `signlasso <args...>` (args excludes the program name). Paths of the
/// written artifacts go to `out`, one per line; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace signlasso::cli
