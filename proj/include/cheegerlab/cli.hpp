#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cheegerlab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_config = 2,
  exit_budget = 3,
  exit_inapplicable = 4,
  exit_invalid_spec = 5,
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cheegerlab
