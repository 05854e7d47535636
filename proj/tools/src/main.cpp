#include <iostream>

#include "body_cli/cli.hpp"

int main(int argc, char** argv) { return body::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
