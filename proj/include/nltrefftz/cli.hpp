#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nltrefftz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand; args excludes the program name.
/// Diagnostics go to `err` as single "error: <kind>: <reason>" lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nltrefftz::cli
