#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rnewton {

/// Exit statuses of the command-line front end.
enum CliStatus : int { cli_ok = 0, cli_parse_error = 2, cli_numerical_error = 3 };

/// Runs one invocation; args[0] is the program name. Results go to `out` as
/// key=value lines, traces too when --trace is given; diagnostics go to
/// `err` as "error=<category>" and "message=<text>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rnewton
