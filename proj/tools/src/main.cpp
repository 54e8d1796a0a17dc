#include <iostream>
#include <string>
#include <vector>

#include "entropic_fx_cli/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return efx::cli::run(args, std::cout, std::cerr);
}
