#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mhviz::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitUndefined = 3;
inline constexpr int kExitIo = 4;

// Runs `mhviz <subcommand> ...`; args excludes the program name.
// Machine output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:b:step" (inclusive of b when step divides b - a) or "x,y,z".
std::vector<double> parse_grid(const std::string& text);

}  // namespace mhviz::cli
