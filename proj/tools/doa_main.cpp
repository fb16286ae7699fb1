// Entry point for the doa command-line tool.
#include <iostream>
#include <string>
#include <vector>

#include "doa/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return doa::run_cli(args, std::cout, std::cerr);
}
