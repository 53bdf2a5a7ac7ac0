#include <iostream>
#include <string>
#include <vector>

#include "gnskit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gnskit::run_cli(args, std::cout, std::cerr);
}
