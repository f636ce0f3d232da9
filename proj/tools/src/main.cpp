#include <iostream>

#include "invman_cli/cli.hpp"

int main(int argc, char** argv) { return invman::cli::run(argc, argv, std::cout, std::cerr); }
