#include <iostream>
#include <string>
#include <vector>

#include "irskg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return irskg::run_cli(args, std::cout, std::cerr);
}
