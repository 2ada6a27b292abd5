#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace absparse {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNo = 3;
inline constexpr int kExitFail = 4;
inline constexpr int kExitInconclusive = 5;

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`; function files are read from `in` when the input is "-".
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace absparse
