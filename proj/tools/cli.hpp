#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fei::cli {

/// Exit status contract of the fei tool.
enum ExitCode : int { kOk = 0, kComputationError = 1, kUsageError = 2 };

/// Runs the tool on `args` (without the program name). Documents go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fei::cli
