#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace endoscope::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2, kPrecisionError = 3 };

// Parses args (without the program name), writes the report to out and diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace endoscope::cli
