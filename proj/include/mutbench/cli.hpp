#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mutbench {

// Exit codes: 0 success, 1 partial/corpus/output failure, 2 usage or config
// error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mutbench
