#include <iostream>
#include <string>
#include <vector>

#include "convexity_gate/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return convexity_gate::run_cli(args, std::cout, std::cerr);
}
