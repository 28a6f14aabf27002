#include <iostream>

#include "scenedirector/cli.hpp"

int main(int argc, char** argv)
{
  return scenedirector::cli::run(argc, argv, std::cout, std::cerr);
}
