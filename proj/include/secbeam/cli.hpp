#pragma once

#include <string>
#include <vector>

namespace secbeam {

/// Runs the command-line tool on the given arguments (program name excluded).
/// Exit codes: 0 success, 1 parse or numerical error, 2 unachievable common
/// rate.
int run_cli(const std::vector<std::string>& args);

}  // namespace secbeam
