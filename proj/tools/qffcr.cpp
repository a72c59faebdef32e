#include <iostream>

#include "qffcr/cli.hpp"

int main(int argc, char** argv) { return qffcr::cli::run(argc, argv, std::cout, std::cerr); }
