#include <iostream>

#include "fock/cli/commands.hpp"

int main(int argc, char** argv) { return fock::cli::run(argc, argv, std::cout, std::cerr); }
