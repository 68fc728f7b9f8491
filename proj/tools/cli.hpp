#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace srgraph::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kNotFound = 1;
inline constexpr int kUsage = 2;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srgraph::cli
