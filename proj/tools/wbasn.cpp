#include <iostream>

#include "wbasn/cli.hpp"

int main(int argc, char** argv) { return wbasn::run_cli(argc, argv, std::cout, std::cerr); }
