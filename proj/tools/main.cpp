#include <iostream>
#include <string>
#include <vector>

#include "means/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return means::cli::main(std::move(args), std::cout, std::cerr);
}
