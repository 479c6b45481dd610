#include "bojtc/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return bojtc::cli::runCli(std::vector<std::string>(argv, argv + argc),
                            std::cout, std::cerr);
}
