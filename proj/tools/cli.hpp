#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ares::cli {

// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;

// Entry point shared by main() and the CLI tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ares::cli
