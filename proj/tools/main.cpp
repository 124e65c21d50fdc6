#include <string>
#include <vector>

#include "alkit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return alkit::run_cli(args);
}
