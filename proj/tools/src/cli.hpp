#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace harment::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kSpecError = 2;
inline constexpr int kNumericalError = 3;
inline constexpr int kIoError = 4;

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harment::cli
