#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace framekit::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,      // bad flags, unreadable or malformed input
  kMathematical = 3,    // NotAFrame, NotControlled, ...
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`; files named by --output are written directly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace framekit::cli
