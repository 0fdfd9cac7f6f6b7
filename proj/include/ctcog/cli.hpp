#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctcog::io {

// Runs one CLI invocation; `args` excludes the program name. Returns the
// process exit code: 0 success, 1 failed --assert check, 2 input error,
// 3 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctcog::io
