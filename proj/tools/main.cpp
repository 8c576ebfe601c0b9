#include <iostream>
#include <string>
#include <vector>

#include "secx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return secx::run_cli(args, std::cout, std::cerr);
}
