#pragma once

#include <iosfwd>

namespace sfwm::cli {

/// Parses arguments and runs one subcommand. Returns 0 on success, 1 on
/// invalid input and 2 when a numerical procedure fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace sfwm::cli
