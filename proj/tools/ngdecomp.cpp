#include <iostream>

#include "ngd/cli.hpp"

int main(int argc, char** argv) { return ngd::cli::run(argc, argv, std::cout, std::cerr); }
