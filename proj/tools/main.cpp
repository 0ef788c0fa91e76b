#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto res = bmerge::cli::run(args);
  std::cout << res.out;
  std::cerr << res.err;
  return res.code;
}
