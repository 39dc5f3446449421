#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrcov {

/// Runs the `lrcov` command line with `args` (program name excluded), writing
/// results to `out` and logs and diagnostics to `err`. Returns the process
/// exit status: 0 success, 2 configuration, 3 input/parse, 4 numerical,
/// 1 anything else.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrcov
