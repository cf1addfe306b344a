#include <iostream>

#include "cbandit/cli.hpp"

int main(int argc, char** argv) { return cbandit::run_cli(argc, argv, std::cout, std::cerr); }
