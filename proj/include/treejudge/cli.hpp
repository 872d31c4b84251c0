#pragma once

#include <string>
#include <vector>

namespace treejudge {

// Entry point behind the `treejudge` binary, callable in-process for tests.
// Exit codes: 0 success, 1 usage error, 2 pipeline failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace treejudge
