#ifndef MINIMAX_TOOLS_CLI_HPP_
#define MINIMAX_TOOLS_CLI_HPP_

#include <iosfwd>

namespace minimax::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

// Entry point of the minimax command-line tool. Machine-readable results go to
// `out` (or the --output file), diagnostics and human summaries to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minimax::cli

#endif  // MINIMAX_TOOLS_CLI_HPP_
