#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levychaos {

/// Exit codes: 0 success / all checks passed, 1 verification failure, 2 config or guard error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levychaos
