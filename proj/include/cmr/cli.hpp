#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cmr {

/// Exit codes of the cm-reduce front end.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,        // a verdict or tolerance failed
  kExitInvalid = 2,     // usage, parse or validation error
  kExitSolver = 3,      // resonance or fixed-point non-convergence
  kExitBlowUp = 4,      // non-finite state during integration
};

/// Runs `cm-reduce <command> [flags]`. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmr
