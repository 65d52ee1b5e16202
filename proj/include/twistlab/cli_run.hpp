#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twistlab {

// Executes one CLI invocation (argv without the program name) and writes
// the RunRecord (JSON, or CSV for tabular scans with --format csv) to
// `out`. Returns 0 on success, 1 on validation errors, 2 on numerical
// failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace twistlab
