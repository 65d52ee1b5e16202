#include <iostream>
#include <string>
#include <vector>

#include "twistlab/cli_run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return twistlab::run_cli(args, std::cout, std::cerr);
}
