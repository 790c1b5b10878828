#include <string>
#include <vector>

#include "causekit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return causekit::run_subcommand(args);
}
