#ifndef IDV_CLI_HPP
#define IDV_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace idv::cli {

enum ExitCode { all_matched = 0, mismatch = 1, inconclusive = 2, usage_error = 3 };

/// Runs the front end on `args` (without the program name).  Reports go to
/// `out`, diagnostics to `err`.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idv::cli

#endif  // IDV_CLI_HPP
