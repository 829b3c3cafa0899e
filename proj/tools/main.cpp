#include <iostream>

#include "freer/cli.hpp"

int main(int argc, char** argv) {
  return freer::cli::run(argc, argv, std::cout, std::cerr);
}
