#include <iostream>

#include "fbm2d/cli.hpp"

int main(int argc, char** argv) { return fbm2d::cli::run(argc, argv, std::cout, std::cerr); }
