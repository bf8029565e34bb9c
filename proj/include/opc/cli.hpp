#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace opc {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_holds = 0,
    exit_fails = 1,
    exit_input = 2,
    exit_resource = 3,
};

/// Runs the `opc` command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace opc
