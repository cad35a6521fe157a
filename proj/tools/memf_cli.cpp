#include <iostream>
#include <string>
#include <vector>

#include "memf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return memf::run_cli(args, std::cout, std::cerr);
}
