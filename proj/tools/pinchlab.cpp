#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return pinchlab::cli::run(argc, argv, std::cout, std::cerr); }
