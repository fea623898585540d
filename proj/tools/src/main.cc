#include "arp_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return arp::cli::run_cli(argc, argv, std::cout, std::cerr); }
