#include <iostream>

#include "maslovflow/cli/cli.hpp"

int main(int argc, char** argv) { return maslovflow::cli::run(argc, argv, std::cout, std::cerr); }
