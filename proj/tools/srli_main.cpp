#include <iostream>
#include <vector>

#include "srli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return srli::cli::run(args, std::cout, std::cerr);
}
