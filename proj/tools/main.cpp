#include <string>
#include <vector>

#include "shapelets/cli.hpp"

int main(int argc, char** argv) {
  return shapelets::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
