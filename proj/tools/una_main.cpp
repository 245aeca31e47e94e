#include <iostream>
#include <string>
#include <vector>

#include "una/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return una::cli::run(args, std::cout, std::cerr);
}
