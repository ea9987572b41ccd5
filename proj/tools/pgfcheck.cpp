#include <iostream>

#include "pgfcheck/cli/driver.hpp"

int main(int argc, char** argv) { return pgfcheck::cli::run(argc, argv, std::cout, std::cerr); }
