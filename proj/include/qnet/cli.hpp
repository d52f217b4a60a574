#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qnet {

/// Runs one command; `args` excludes the program name. Exit codes: 0 ok,
/// 2 input/validation error, 3 resource cap, 4 internal failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnet
