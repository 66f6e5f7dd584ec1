#pragma once

// Batch command-line front end. Every output file starts with '#' lines
// carrying the tool version, the subcommand and its effective configuration,
// so a run can be replayed from its own output.

#include <iosfwd>
#include <string>
#include <vector>

namespace frobdist::cli {

/// args excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace frobdist::cli
