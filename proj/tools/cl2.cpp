#include <iostream>
#include <string>
#include <vector>

#include "cl2/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cl2::run_cli(args, std::cin, std::cout, std::cerr);
}
