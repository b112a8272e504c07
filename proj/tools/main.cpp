#include <iostream>
#include <string>
#include <vector>

#include "uzawa/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return uzawa::cli::run(args, std::cout, std::cerr);
}
