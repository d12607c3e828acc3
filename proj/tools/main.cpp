#include <iostream>
#include <string>
#include <vector>

#include "divstab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return divstab::run_cli(args, std::cout, std::cerr);
}
