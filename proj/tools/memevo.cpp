#include <iostream>
#include <string>
#include <vector>

#include "memevo/cli.hpp"

int main(int argc, char** argv) {
    return memevo::cli::main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
