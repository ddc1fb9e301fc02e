#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace setfam::cli {

/// Runs one command; args excludes the program name. Returns the process exit code:
/// 0 success, 1 input or contract error, 2 resource error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace setfam::cli
