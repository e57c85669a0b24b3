#pragma once

#include <ostream>

#include "command.hpp"

namespace flatpoly_cli {

enum ExitCode { exit_ok = 0, exit_computation = 1, exit_usage = 2 };

// Runs a validated command and writes the report to cmd.output, or to `out`
// when no output path is set. Diagnostics go to `err`.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

// Full pipeline for main(): parse, execute, map failures onto exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flatpoly_cli
