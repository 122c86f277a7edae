#include <iostream>

#include "dfsopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dfsopt::run_cli(args, std::cout, std::cerr);
}
