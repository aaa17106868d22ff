#include <iostream>
#include <string>
#include <vector>

#include "mbg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mbg::cli::run(std::move(args), {std::cout, std::cerr, std::cin});
}
