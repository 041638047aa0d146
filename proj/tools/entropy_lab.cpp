#include <iostream>

#include "entropy_lab/cli/cli.hpp"

int main(int argc, char** argv) { return entropy_lab::cli::run(argc, argv, std::cout, std::cerr); }
