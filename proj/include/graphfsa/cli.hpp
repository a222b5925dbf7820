#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace graphfsa {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 1 domain validation failure, 2 I/O, format or
/// usage error. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphfsa
