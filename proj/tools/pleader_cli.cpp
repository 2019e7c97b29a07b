#include <iostream>

#include "pleader/cli.hpp"

int main(int argc, char** argv) {
  return pleader::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
