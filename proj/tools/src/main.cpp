#include <iostream>

#include "bwnim/app/cli.hpp"

int main(int argc, char** argv) {
  return bwnim::app::run_cli({argv + 1, argv + argc}, std::cout, std::cerr, std::cin);
}
