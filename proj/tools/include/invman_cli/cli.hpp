#pragma once

#include <exception>
#include <iosfwd>

namespace invman::cli {

enum ExitCode {
  kOk = 0,
  kError = 1,
  kUsage = 2,  // bad flags or a schema violation in an input file
  kNonConvergence = 3,
  kResonance = 4,
  kProofImpossible = 5,
  kUnsupportedDegree = 6,
  kNotValid = 7,  // validate ran but the verdict is negative
};

int exit_code_for(const std::exception& e);

// Entry point of the `invman` tool; writes reports to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invman::cli
