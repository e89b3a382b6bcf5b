#include "deblog/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  const auto result = deblog::run_command(args, std::cout, std::cerr);
  for (const auto& f : result.files) std::cerr << "wrote " << f << "\n";
  return result.exit_code;
}
