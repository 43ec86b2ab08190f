#include <string>
#include <vector>

#include "cmkt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cmkt::cli::run(args);
}
