#include <iostream>

#include "surf4/commands.hpp"

int main(int argc, char** argv) { return surf4::cli::run(argc, argv, std::cout, std::cerr); }
