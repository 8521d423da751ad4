#pragma once

#include <iosfwd>

namespace qtorsion {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitInputError = 2,
  kExitStrictWarning = 3,
  kExitSurgeryPrecondition = 4,
};

/// Entry point of the qtorsion command-line tool. Reports go to `out` (or
/// the --out file), diagnostics to `err`. Nothing is written to the report
/// destination unless the command succeeds.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtorsion
