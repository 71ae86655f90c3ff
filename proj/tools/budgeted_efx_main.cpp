#include <iostream>

#include "budgeted_efx/commands.hpp"

int main(int argc, char** argv) {
  return budgeted_efx::run_cli(argc, argv, std::cout, std::cerr);
}
