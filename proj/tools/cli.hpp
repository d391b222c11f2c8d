#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jetlin::cli {

// Exit codes.
inline constexpr int kOk = 0;        // ok, maximally symmetric, verified
inline constexpr int kUsage = 2;     // parse, usage or degenerate-input error
inline constexpr int kNegative = 3;  // not maximally symmetric, not applicable, not verified
inline constexpr int kPartial = 4;   // synthesis stopped at a stage

/// Runs the command line `args` (without the program name). Batch input is
/// read from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace jetlin::cli
