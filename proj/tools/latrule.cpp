#include <iostream>

#include "latrule/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return latrule::cli::run(args, std::cout, std::cerr);
}
