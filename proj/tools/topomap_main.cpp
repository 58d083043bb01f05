#include <vector>

#include "topomap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return topomap::run_cli(args);
}
