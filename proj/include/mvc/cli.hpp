#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvc::cli {

// Parses arguments (without the program name), dispatches to the
// computation modules, and writes a deterministic CSV or JSON report to
// `out`. Exit codes: 0 success, 2 invalid input, 3 budget exceeded,
// 4 invariant violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvc::cli
