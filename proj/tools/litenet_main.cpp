#include <iostream>
#include <string>
#include <vector>

#include "litenet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    litenet::CommandOutcome outcome = litenet::run_cli(args, std::cout, std::cerr);
    return outcome.exit_code;
}
