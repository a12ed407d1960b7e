#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace commusage::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 I/O failure, 2 validation or malformed input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace commusage::cli
