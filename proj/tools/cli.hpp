#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace h14 {

// Runs one henon14 invocation; args exclude the program name.
// Returns 0 on success, 1 on a numerical failure, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace h14
