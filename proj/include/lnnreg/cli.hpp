#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lnnreg::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kParse = 2;
inline constexpr int kShape = 3;
inline constexpr int kSolver = 4;

/// Runs one command. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        bool color = false);

}  // namespace lnnreg::cli
