#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace secx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitMalformed = 2;
inline constexpr int kExitPrecondition = 3;

/// Runs the `secx` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secx
