#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace paraunit::cli {

enum ExitCode : int { kPass = 0, kCertificateFailed = 1, kUsageError = 2 };

/// Runs one paraunit command. `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paraunit::cli
