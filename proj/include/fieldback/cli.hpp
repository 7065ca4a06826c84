#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fieldback::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConvergence = 2;

/// Runs one invocation. `args` excludes the program name. Human-readable
/// progress goes to `out`, diagnostics to `err`; artifacts go to --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fieldback::cli
