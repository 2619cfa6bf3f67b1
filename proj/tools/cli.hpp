#pragma once

// Command-line front end. Kept out of main() so tests can drive it.

#include <ostream>

namespace acm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidEstimate = 2;
inline constexpr int kExitConfigError = 3;

/// Parses argv, runs one subcommand, writes artifacts under output_dir and a
/// short summary to `out`. Error records go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acm::cli
