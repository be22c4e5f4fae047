#pragma once

#include <ostream>

namespace holder {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_malformed_config = 1,
  exit_validation = 2,
  exit_numerical = 3,
};

/// Runs one command; data goes to `out` (or --out), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holder
