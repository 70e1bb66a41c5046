#include <iostream>
#include <string>
#include <vector>

#include "translator/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return translator::main_entry(args, std::cout, std::cerr);
}
