#include <iostream>

#include "polyarea/cli.hpp"

int main(int argc, char** argv) { return polyarea::cli::run(argc, argv, std::cout, std::cerr); }
