#include <string>
#include <vector>

#include "acfd/cli.hpp"

int main(int argc, char** argv) {
    return acfd::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
