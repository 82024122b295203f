#include "amfc/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return amfc::cli_dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
