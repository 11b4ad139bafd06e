#pragma once

#include <ostream>

namespace roofkit {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitInvalidInput = 3,
  kExitNotApplicable = 4,
  kExitVerifyFailed = 5,
};

/// Entry point of the `roofkit` command line tool (subcommands compute, scan,
/// rank2, verify). Results go to `out` or to the --out file, diagnostics and
/// timing to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roofkit
