#include <iostream>

#include "remsim/cli.hpp"

int main(int argc, char** argv) { return remsim::cli_main(argc, argv, std::cout, std::cerr); }
