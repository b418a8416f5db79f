#include "cli_app.hpp"

#include <iostream>

int main(int argc, char** argv) { return cdeg::cli::main_entry(argc, argv, std::cout, std::cerr); }
