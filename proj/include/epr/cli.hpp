#pragma once

#include <string>
#include <vector>

namespace epr {

// Entry point behind the eprsim binary. Returns the process exit code:
// 0 success, 2 configuration error, 3 undefined correlation in a required
// output, 1 anything else.
int cli_main(int argc, const char* const* argv);

// Convenience overload for tests.
int cli_main(const std::vector<std::string>& args);

}  // namespace epr
