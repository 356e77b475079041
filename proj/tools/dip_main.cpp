#include <iostream>

#include "dip/cli.hpp"

int main(int argc, char** argv) { return dip::run_cli(argc, argv, std::cout, std::cerr); }
