#include <iostream>
#include <string>
#include <vector>

#include "oraclesim/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return oraclesim::run_command(args, std::cout, std::cerr);
}
