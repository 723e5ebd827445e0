#include <iostream>

#include "cllr/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cllr::cli::run(args, std::cout, std::cerr, std::cin);
}
