#include <iostream>

#include "oqb/cli.hpp"

int main(int argc, char** argv) { return oqb::cli_main(argc, argv, std::cout, std::cerr); }
