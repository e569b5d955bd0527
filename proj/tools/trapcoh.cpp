#include <iostream>
#include <string>
#include <vector>

#include "trapcoh/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return trapcoh::run_cli(args, std::cout, std::cerr);
}
