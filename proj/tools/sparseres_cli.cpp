#include <iostream>

#include "sparseres/cli.hpp"

int main(int argc, char** argv) { return sparseres::run_cli(argc, argv, std::cout, std::cerr); }
