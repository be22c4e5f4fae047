#include <iostream>

#include "holder/cli.hpp"

int main(int argc, char** argv) { return holder::run_cli(argc, argv, std::cout, std::cerr); }
