#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtd {

// Entry point of the command-line tool, separated from main() so tests can
// drive it in-process. `args` excludes the program name; artifacts and
// summaries go to `out`, diagnostics to `err`. Returns the exit code:
// 0 on success, 1 on usage errors, 2 on data errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtd
