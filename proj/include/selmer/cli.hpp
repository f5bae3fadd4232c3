#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace selmer {

inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesisFailure = 2;
inline constexpr int kExitInputError = 3;

// Runs the command line (without the program name). Reports go to `out`,
// diagnostics to `err`; returns 0, 2 or 3.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selmer
