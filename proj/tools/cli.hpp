#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mts::cli {

/// Exit codes: 0 success, 1 domain or configuration error, 2 usage or
/// parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mts::cli
