#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dfsopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (without the program name). Results go to `out`
// unless --out names a file; diagnostics always go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfsopt
