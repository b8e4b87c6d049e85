#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esurf::cli {

// Exit codes (documented in README):
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;   // bad flags / unknown subcommand
inline constexpr int kExitInput = 2;   // unreadable or malformed input
inline constexpr int kExitData = 3;    // single-class data, empty training set
inline constexpr int kExitFile = 4;    // model/output file errors
inline constexpr int kExitEval = 5;    // evaluation doc/sentence mismatch

/// Runs one esurf invocation (args exclude the program name). All normal
/// output goes to `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esurf::cli
