#include <iostream>

#include "halfspace/cli.hpp"

int main(int argc, char** argv) { return halfspace::cli::main(argc, argv, std::cout, std::cerr); }
