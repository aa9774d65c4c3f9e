#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyparse {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

// Runs one command line (without the program name). Artifacts go to the
// files named by --out flags; anything else goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyparse
