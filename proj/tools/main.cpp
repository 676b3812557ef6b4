#include <string>
#include <vector>

#include "secbeam/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return secbeam::run_cli(args);
}
