#include <iostream>
#include <string>
#include <vector>

#include "hcp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hcp::cli::run_cli(args, std::cout, std::cerr);
}
