#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace btrm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerificationFailed = 3;
inline constexpr int kExitResourceCap = 4;

inline constexpr const char* kReportSchema = "report.v1";

/// Runs the command line `args` (without the program name). Reports go to
/// `out` or to files named by --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace btrm::cli
