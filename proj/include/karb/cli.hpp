#pragma once

#include <ostream>

namespace karb::cli {

/// The whole command-line front end; returns the process exit code.
/// 0 success, 1 internal failure, 2 input error, 3 exhaustive-bound error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace karb::cli
