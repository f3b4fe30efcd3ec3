#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twb::cli {

/// Runs one `twb` invocation; `args` excludes the program name. The report
/// goes to `out`, diagnostics to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twb::cli
