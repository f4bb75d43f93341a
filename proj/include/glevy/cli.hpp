#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glevy::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitStatus : int {
    kOk = 0,
    kParseError = 2,
    kAssumptionViolated = 3,
    kNumericalAbort = 4,
};

/// Runs one batch command. `args` excludes the program name. The JSON record goes
/// to `out` (unless --quiet) and, with --out <dir>, to <dir>/<command>.json next to
/// any CSVs and a <command>.timing.json holding the wall time. Nothing is written
/// on a parse error or a numerical abort.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glevy::cli
