#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nibbled {

// Shared entry point of the command-line binary, exposed so the test suite
// can drive it in process.  args excludes the program name.  Returns the
// process exit code: 0 success, 1 domain error (bad input or usage), 2
// internal inconsistency.  Reports go to `out` unless --out names a file;
// diagnostics and usage errors go to `err`.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nibbled
