#include <iostream>

#include "seamcheck/cli.hpp"

int main(int argc, char** argv) { return seamcheck::run_cli(argc, argv, std::cout, std::cerr); }
