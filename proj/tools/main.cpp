#include <iostream>
#include <string>
#include <vector>

#include "hkf/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hkf::run_cli(args, std::cout, std::cerr);
}
