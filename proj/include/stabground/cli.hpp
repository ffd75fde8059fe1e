#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stabground::cli {

enum ExitCode { kOk = 0, kUserError = 1, kCapacityError = 2, kInternalError = 3 };

// args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stabground::cli
