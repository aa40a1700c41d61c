#include "z2kit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return z2kit::cli::run(argc, argv, std::cout, std::cerr); }
