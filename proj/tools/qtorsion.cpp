#include <iostream>

#include "qtorsion/cli.hpp"

int main(int argc, char** argv) { return qtorsion::run_cli(argc, argv, std::cout, std::cerr); }
