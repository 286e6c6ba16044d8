#include <iostream>

#include "karb/cli.hpp"

int main(int argc, char** argv) {
    return karb::cli::run(argc, argv, std::cout, std::cerr);
}
