#include <iostream>
#include <string>
#include <vector>

#include "vkf/cli.hpp"

int main(int argc, char** argv) {
  return vkf::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
