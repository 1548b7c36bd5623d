#include <iostream>

#include "rabistark/cli.hpp"

int main(int argc, char** argv) { return rabistark::cli::main_entry(argc, argv, std::cout, std::cerr); }
