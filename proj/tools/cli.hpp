#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dbff/error.hpp"

namespace dbff::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(ErrorKind kind) noexcept;

/// Parses a comma-separated list of rates; each entry is a fraction ("0.1")
/// or a percentage ("10%"). Throws Error{InvalidArgument}.
std::vector<double> parse_rates(const std::string& text);
double parse_rate(const std::string& text);

/// Runs the tool with `args` (excluding the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dbff::cli
