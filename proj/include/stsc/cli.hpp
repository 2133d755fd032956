#pragma once

#include <string>
#include <vector>

namespace stsc {

// Exit status: 0 = clean, 1 = operational error, 2 = at least one
// alert-severity finding. args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace stsc
