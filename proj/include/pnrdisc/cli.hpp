#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnrdisc {

// Executes one CLI invocation (args exclude the program name). Tables go to
// `out` or the --out file; diagnostics go to `err`. Returns the process exit
// status: 0 on success, nonzero with a one-line diagnostic on bad input.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnrdisc
