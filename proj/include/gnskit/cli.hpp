#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gnskit {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvariant = 1,
    kExitInput = 2,
    kExitCapacity = 3,
};

/// Runs one `gnskit` invocation; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gnskit
