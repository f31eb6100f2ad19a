#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdkit::cli {

enum ExitCode : int { kSuccess = 0, kMalformedInput = 1, kNumericFailure = 2 };

/// Runs one bdkit invocation. `args` excludes the program name. Reports go
/// to `out` (or the --out file), messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace bdkit::cli
