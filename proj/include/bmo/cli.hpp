#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bmo::cli {

/// Runs one command (eval, scan, verify, constant, optimizer, bmo). args excludes the
/// program name. Returns 0 on success, 1 when a verification suite fails, 2 on a
/// usage or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `in` feeds the bmo command when no --input file is given.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace bmo::cli
