#include <iostream>

#include "bhs/app/cli.hpp"

int main(int argc, char** argv) { return bhs::app::run_cli(argc, argv, std::cout, std::cerr); }
