#include <iostream>

#include "spherefield/cli.hpp"

int main(int argc, char** argv) { return spherefield::run_cli(argc, argv, std::cout, std::cerr); }
