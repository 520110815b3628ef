#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stereobench {

/// Runs one subcommand. Returns 0 on success, 1 on a domain or I/O error and
/// 2 on a usage error. argv[0] is the program name.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stereobench
