#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csm {

/// Runs the command line `args` (without the program name). Returns 0 on
/// success, 1 when diagnostics or overlaps were found, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csm
