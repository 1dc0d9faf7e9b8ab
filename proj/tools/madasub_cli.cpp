#include <string>
#include <vector>

#include "madasub/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return madasub::run_cli(args);
}
