#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace trilin::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNotLinearizable = 1;  // also branch mismatch and Refuted
inline constexpr int kParseError = 2;
inline constexpr int kIndeterminate = 3;
inline constexpr int kAnsatzFailed = 4;
inline constexpr int kOtherError = 5;

// Runs the command line args (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trilin::cli
