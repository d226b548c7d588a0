#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dualwin::cli {

/// Runs the command line `args` (args[0] is the program name). Returns the
/// process exit code: 0 on success, 1 on validation or I/O errors, 2 on
/// usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualwin::cli
