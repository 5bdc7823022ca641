#include "rkg/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rkg::run_cli(argc, argv, std::cout, std::cerr); }
