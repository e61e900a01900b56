#include <iostream>

#include "idv/cli.hpp"

int main(int argc, char** argv) {
  return idv::cli::main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
