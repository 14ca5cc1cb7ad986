#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dickson::cli {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,       ///< certificate rejected, unrefuted family pair, internal error
  kRefutation = 2,    ///< a refuter produced its witness
  kBudget = 3,        ///< evaluation budget, record limit or oracle work cap exhausted
  kUsage = 4,         ///< bad flags, DSL or input document
};

/// Runs one command. `args` excludes the program name. Machine output goes
/// to `out` (or to the file named by --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dickson::cli
