#include <iostream>

#include "ldcube/cli.hpp"

int main(int argc, char** argv) { return ldcube::cli::run(argc, argv, std::cout, std::cerr); }
