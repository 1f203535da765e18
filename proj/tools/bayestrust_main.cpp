#include <iostream>

#include "bayestrust/harness.hpp"

int main(int argc, char** argv) { return bayestrust::run_cli(argc, argv, std::cout, std::cerr); }
