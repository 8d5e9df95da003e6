#include <iostream>

#include "vitalchirp/cli/commands.hpp"

int main(int argc, char** argv) { return vitalchirp::cli::run(argc, argv, std::cout, std::cerr); }
