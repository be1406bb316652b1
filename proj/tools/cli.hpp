#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sevstack::cli {

/// Runs one command line (without the program name). Errors print a single
/// `E_CODE: detail` line on `err` and return a nonzero status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sevstack::cli
