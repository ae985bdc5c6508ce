#pragma once

#include <iosfwd>

namespace dressq::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kValidation = 3, kNumerical = 4 };

/// Parses argv and runs one subcommand. Normal output goes to `out`; errors
/// are a single "error: ..." line on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dressq::cli
