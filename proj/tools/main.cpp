#include <iostream>
#include <string>
#include <vector>

#include "riesz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return riesz::run_cli(args, std::cout, std::cerr);
}
