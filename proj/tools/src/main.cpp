#include <iostream>

#include "volnet/cli/cli.hpp"

int main(int argc, char** argv) { return volnet::cli::run_cli(argc, argv, std::cout, std::cerr); }
