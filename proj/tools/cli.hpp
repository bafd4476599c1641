#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dbisim::cli {

/// Exit codes: 0 bisimilar/equivalent (or a successful transform),
/// 1 not bisimilar, 2 bad input or model error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dbisim::cli
