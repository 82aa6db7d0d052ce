#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cabello::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,      // malformed flags or values outside an operation's domain
    kNumerical = 3,  // a consistency check on computed values failed
    kNoGo = 4,       // request rejected because the state is maximally entangled
};

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip JSON is used for records; CSV cells use this fixed
/// 17-significant-digit, locale-independent form.
std::string format_double(double v);

}  // namespace cabello::cli
