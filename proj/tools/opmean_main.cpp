#include <iostream>

#include "opmean/cli.hpp"

int main(int argc, char** argv) { return opmean::run_cli(argc, argv, std::cout, std::cerr); }
