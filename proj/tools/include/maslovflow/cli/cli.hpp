#pragma once

#include <iosfwd>

namespace maslovflow::cli {

enum ExitCode : int { kOk = 0, kDisagree = 1, kNumerical = 2, kConfig = 3 };

/// Runs one command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maslovflow::cli
