#include <iostream>

#include "qmd/cli.hpp"

int main(int argc, char** argv) { return qmd::run_cli(argc, argv, std::cout, std::cerr); }
