#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cllr::cli {

enum Status { kOk = 0, kNegative = 1, kUsage = 2, kResource = 3 };

/// Environment variable holding the default state bound.
inline constexpr const char* kStateBoundEnv = "CLLR_STATE_BOUND";

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace cllr::cli
