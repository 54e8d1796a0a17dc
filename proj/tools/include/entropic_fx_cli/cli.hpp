#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace efx::cli {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,    // a verification command ran but its bound was not met
    exit_usage_error = 2,     // bad flags, bad config file, invalid parameters
    exit_numerical_error = 3, // a numerical method failed on valid input
    exit_internal_error = 4,
};

/// Runs one command line, excluding the program name. Command output goes to `out`;
/// errors are written to `err` as a single-line JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace efx::cli
