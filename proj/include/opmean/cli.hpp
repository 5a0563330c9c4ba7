#pragma once

#include <iosfwd>

namespace opmean {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitCheckFailure = 1,
  kExitInputError = 2,
  kExitPrecondition = 3,
  kExitNumerical = 4,
};

/// opmean mean | verify | example33. Reads OPMEAN_SEED from the environment.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opmean
