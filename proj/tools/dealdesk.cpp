#include <iostream>

#include "dealdesk/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dealdesk::cli::run(args, std::cout, std::cerr);
}
