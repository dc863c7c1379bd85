#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hymn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kSuiteFailure = 3 };

/// Runs one `hymn` invocation. args[0] is the program name. Results go to
/// --out (or `out` when --out is "-"), diagnostics to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hymn::cli
