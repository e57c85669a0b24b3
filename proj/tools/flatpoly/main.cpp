#include <iostream>
#include <string>
#include <vector>

#include "execute.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flatpoly_cli::run(args, std::cout, std::cerr);
}
