#include <iostream>
#include <string>
#include <vector>

#include "bcd/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bcd::cli::run(args, std::cout, std::cerr);
}
