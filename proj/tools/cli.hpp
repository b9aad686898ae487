#pragma once

#include <ostream>

namespace curvedwave::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Parses argv and runs one subcommand: charts, verify, spectrum, wave-eval, suite.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvedwave::cli
