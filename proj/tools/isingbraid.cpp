#include <iostream>

#include "isingbraid/cli.hpp"

int main(int argc, char **argv) { return isingbraid::cli::run(argc, argv, std::cout, std::cerr); }
