#include <iostream>
#include <string>
#include <vector>

#include "qbeat/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return qbeat::cli::main(args, std::cout, std::cerr);
}
