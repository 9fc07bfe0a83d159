#include <iostream>

#include "prolate/cli.hpp"

int main(int argc, char** argv) { return prolate::cli::run(argc, argv, std::cout, std::cerr); }
