#include <iostream>

#include "sonarnav/cli.hpp"

int main(int argc, char** argv) { return sonarnav::cli_main(argc, argv, std::cout, std::cerr); }
