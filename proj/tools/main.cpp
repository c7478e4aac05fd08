#include <iostream>

#include "anontx/cli/app.hpp"

int main(int argc, char** argv) {
  return anontx::cli::run_cli(argc, argv, std::cout, std::cerr);
}
