#include <iostream>

#include "oeh/cli/app.hpp"

int main(int argc, char** argv) { return oeh::cli::run(argc, argv, std::cout, std::cerr); }
