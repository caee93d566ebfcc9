#pragma once

#include <iosfwd>

namespace metrogain::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kSolverFailure = 4;

/// Runs the metrogain command line. Results go to out, diagnostics to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metrogain::cli
