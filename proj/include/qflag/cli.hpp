#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qflag::cli {

// Exit codes: 0 all checks pass, 1 a verification failed, 2 invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// suite names accepted by `verify`
const std::vector<std::string>& suite_names();

}  // namespace qflag::cli
