#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imdd::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kResourceCap = 4;

int run(int argc, char** argv);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imdd::cli
