#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcross::cli {

/// Runs one CLI invocation. Exit codes: 0 all checks pass, 1 check failures,
/// 2 parse/usage errors (location on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcross::cli
