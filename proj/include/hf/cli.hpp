#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Subcommands: metric, hmm-filter, kalman, riccati, lab.
/// Exit 0 on success, 2 on command-line or config validation errors, 1 on
/// runtime failures (impossible observation, non-convergence). `args`
/// excludes the program name.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int parse_and_dispatch(int argc, char** argv);

}  // namespace hf::cli
