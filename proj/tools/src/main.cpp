#include <iostream>

#include "aeropipe/cli.hpp"

int main(int argc, char** argv) {
  return aeropipe::cli::run_cli(argc, argv, std::cout, std::cerr);
}
