#include <iostream>
#include <string>
#include <vector>

#include "zbrng/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto result = zbrng::cli::run(args);
    (result.exit_code == 2 ? std::cerr : std::cout) << result.report;
    return result.exit_code;
}
