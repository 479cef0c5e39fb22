// cli.hpp — config-driven experiment driver behind the lindlab binary

#pragma once

#include <string>
#include <vector>

namespace lindlab {

// Exit codes: 0 success, 1 operational error, 2 a mathematical bound check failed.
int run_cli(const std::vector<std::string>& args);

}  // namespace lindlab
