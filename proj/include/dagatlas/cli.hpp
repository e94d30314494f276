#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dagatlas {

// The whole command-line surface, factored out of main() so tests can drive
// it in-process. `args` excludes the program name. Returns the process exit
// code: 0 on success, nonzero on any error; diagnostics go to `err`, data to
// `out` or files.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace dagatlas
