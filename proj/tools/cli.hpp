#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace teamcomp::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr unsigned long long kDefaultSeed = 0;

/// Runs one subcommand. `args` excludes the program name. Results go to files
/// named on the command line; `out` gets a short human summary and `err` gets
/// diagnostics.
int run_subcommand(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace teamcomp::cli
