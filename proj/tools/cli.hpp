#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace speakerattr::cli {

// Exit codes: 0 success, 1 runtime failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (args[0] is the program name). Results go to `out`,
// diagnostics and progress to `err`. `in` feeds interactive annotation.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace speakerattr::cli
