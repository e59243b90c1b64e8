#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace riesz {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

/// Runs `riesz-uncertain <validate|classify|table|transform> ...`; args[0] is
/// the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riesz
