#include "spt/cli.hpp"

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    try {
        return spt::cli::run(argc, argv, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "spt: " << e.what() << "\n";
        return spt::cli::kFail;
    }
}
