#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace convexity_gate {

/// Runs one subcommand. `args` excludes the program name. JSON goes to
/// `out`; help text and usage go to `err`. Returns 0 when the checked
/// condition holds (or nothing was violated), 1 when it fails, 2 on bad input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace convexity_gate
