#pragma once

#include <iosfwd>

namespace rodeo::cli {

//! Exit codes of the command-line tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_runtime = 3;

//! Parses argv (argv[0] is the program name), runs one subcommand and
//! returns its exit code. Results and printed values go to `out`,
//! diagnostics to `err`.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rodeo::cli
