#include <iostream>

#include "cfq/cli/commands.hpp"

int main(int argc, char** argv) { return cfq::cli::run(argc, argv, std::cout, std::cerr); }
