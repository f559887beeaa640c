#include <vector>

#include "varmesh/cli.hpp"

int main(int argc, char** argv) {
    return varmesh::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
