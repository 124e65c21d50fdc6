#pragma once

#include <string>
#include <vector>

namespace alkit {

// Entry point for the `alkit` command-line tool; args excludes argv[0].
// Returns 0 on success, 1 for usage/validation problems, 2 for numerical
// failures. Subcommands: design, fit, emulate, optimize, screen,
// check-theory, plot.
int run_cli(const std::vector<std::string>& args);

}  // namespace alkit
