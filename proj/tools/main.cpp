#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return fgame::cli::run(argc, argv, std::cout, std::cerr); }
