#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vpoly::cli {

enum ExitCode : int {
    ok = 0,
    failed = 1,  ///< a validation, convergence or verification check did not pass
    usage = 2,   ///< bad arguments or configuration
};

/// Runs one command line (args[0] is the program name). Text goes to out/err;
/// data files are written where the options say.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Splices a JSON config file into the argument list: each key k becomes --k value
/// (arrays repeat the flag, true booleans become bare flags, false ones are dropped),
/// inserted right after the subcommand so explicit flags, parsed later, win.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace vpoly::cli
