#include "mlp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mlp::run_cli(argc, argv, std::cout, std::cerr); }
