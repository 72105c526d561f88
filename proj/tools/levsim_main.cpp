#include <iostream>

#include "levsim/cli_io.hpp"

int main(int argc, char** argv) { return levsim::run_cli(argc, argv, std::cout, std::cerr); }
