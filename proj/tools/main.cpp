#include <iostream>

#include "stabground/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stabground::cli::run(args, std::cout, std::cerr);
}
