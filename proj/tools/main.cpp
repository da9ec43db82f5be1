#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    auto r = hbc::cli::run(std::vector<std::string>(argv + 1, argv + argc));
    std::cout << r.output;
    return r.exit_code;
}
