#include <iostream>

#include "hungrybat/cli.hpp"

int main(int argc, char** argv) {
  return hbat::cli::run(argc, argv, std::cout, std::cerr);
}
