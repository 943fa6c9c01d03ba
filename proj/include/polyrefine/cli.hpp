#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyrefine {

/// Exit codes of the command-line tool.
enum ExitCode : int
{
    exit_ok = 0,
    exit_violations = 1,   ///< quality found violations
    exit_usage = 2,
    exit_parse = 3,
    exit_validation = 4,
    exit_io = 5,
    exit_failure = 6,      ///< any other library error
};

/**
 * Subcommands: refine, adapt, quality, render. `args` excludes the program
 * name. Regular output goes to `out`, one-line diagnostics to `err`.
 */
int cli_main(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

int cli_main(int argc, char ** argv);

} // namespace polyrefine
