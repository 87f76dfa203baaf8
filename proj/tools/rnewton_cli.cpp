#include <iostream>
#include <string>
#include <vector>

#include "rnewton/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rnewton::run_cli(args, std::cout, std::cerr);
}
