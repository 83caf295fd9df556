#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return rodeo::cli::cli_dispatch(argc, argv, std::cout, std::cerr);
}
