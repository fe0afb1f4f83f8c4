#pragma once

// Command-line front end. run() is the whole program minus process exit so
// tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace snd::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kConfigError = 3, kSolverError = 4 };

/// args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snd::cli
