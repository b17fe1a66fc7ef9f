#include <string>
#include <vector>

#include "npcspec_tools/commands.hpp"

int main(int argc, char** argv) {
  return npcspec::tools::run_cli(std::vector<std::string>(argv, argv + argc));
}
