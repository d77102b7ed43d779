#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace euler3 {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitNoConvergence = 2,
    kExitVerificationFailed = 3,
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace euler3
