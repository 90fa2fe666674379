#include <iostream>
#include <string>
#include <vector>

#include "orthoreg/cli.hpp"

int main(int argc, char** argv) {
  return orthoreg::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
