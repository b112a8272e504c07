#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uzawa::cli {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,          // usage, I/O, parse or solver error
  kExitMaxIter = 2,        // a solve stopped at max_iter
  kExitVerifyFailed = 3,
};

/// Runs one command line (without the program name), writing normal output
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uzawa::cli
