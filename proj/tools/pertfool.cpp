#include <iostream>
#include <string>
#include <vector>

#include "pertfool/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pertfool::cli::run(args, std::cout, std::cerr);
}
