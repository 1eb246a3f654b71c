#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyrigid {

/// Runs the polyrigid command line; args[0] is the program name. Returns the
/// exit code: 0 on success, 1 on usage or I/O errors, 2 when an invariant
/// check fails.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyrigid
