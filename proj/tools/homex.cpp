#include <iostream>

#include "homex/cli.hpp"

int main(int argc, char** argv) { return homex::cli::run({argv + 1, argv + argc}, std::cout, std::cerr); }
