#include <iostream>

#include "dynnorm/cli.hpp"

int main(int argc, char** argv) {
  return dynnorm::run_cli(argc, argv, std::cout, std::cerr);
}
