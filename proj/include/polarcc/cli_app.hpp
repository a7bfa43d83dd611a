#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polarcc::cli {

/// Runs one command-line invocation (without the program name).
/// Exit status: 0 on success, 2 on a usage error, 1 on a numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polarcc::cli
