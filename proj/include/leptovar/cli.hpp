#pragma once

#include <iosfwd>

namespace leptovar::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDataError = 2,
    kVerificationFailure = 3,
};

// Entry point for the leptovar executable. Regular output goes to `out`
// unless --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace leptovar::cli
