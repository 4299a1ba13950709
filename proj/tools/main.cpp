#include <iostream>
#include <string>
#include <vector>

#include "mtdist/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mtd::cli_main(args, std::cout, std::cerr);
}
