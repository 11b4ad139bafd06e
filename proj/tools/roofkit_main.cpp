#include <iostream>

#include "roofkit/cli.hpp"

int main(int argc, char** argv) { return roofkit::run_cli(argc, argv, std::cout, std::cerr); }
