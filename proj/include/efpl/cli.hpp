#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace efpl {

// Runs one command-line invocation; args excludes the binary name.
// Exit codes: 0 ok (or evaluated true), 1 evaluated false, 2 validation
// error, 3 discrepancy found, 4 usage or I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace efpl
