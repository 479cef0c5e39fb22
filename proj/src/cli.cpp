// cli.cpp — placeholder, filled in with the command dispatch

#include "lindlab/cli.hpp"

namespace lindlab {

int run_cli(const std::vector<std::string>&) {
    return 1;
}

}  // namespace lindlab
