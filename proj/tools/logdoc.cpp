#include <iostream>

#include "logdoc/engine.hpp"

int main(int argc, char** argv) { return logdoc::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
