#pragma once

#include <iosfwd>

#include "solarmap/error.hpp"

namespace solarmap::cli {

/// Process exit codes; documented in `solarmap --help`.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kMissingFile = 3,
  kParseFailure = 4,
  kInvalidData = 5,
  kUnsupportedRaster = 6,
  kWriteFailure = 7,
};

int exit_code_for(ErrorCode code) noexcept;

/// Runs one CLI invocation. Data goes to files or `out`; progress and the
/// machine-readable error line go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace solarmap::cli
