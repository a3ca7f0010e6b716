#pragma once

#include <iosfwd>

namespace recon {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,  // instability, non-convergence, infeasibility, failed validation
  kExitIo = 3,
};

/// Entry point of the `recon` tool, kept in the library so tests can drive it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace recon
