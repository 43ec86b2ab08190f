#pragma once

#include <string>
#include <vector>

namespace cmkt::cli {

// Full argv-style invocation (args[0] is the program name).  Returns the
// process exit code: 0 on success (a degenerate equilibrium is data, not
// failure), 1 on usage or schema errors, 2 on numerical failure such as a
// non-productive economy.
int run(const std::vector<std::string>& args);

}  // namespace cmkt::cli
