#pragma once

#include <ostream>

namespace fgame::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kParameter = 2,
  kConsistency = 3,
  kMismatch = 4,
};

/// Runs one command line; the report goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fgame::cli
