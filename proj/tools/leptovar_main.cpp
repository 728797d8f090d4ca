#include "leptovar/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return leptovar::cli::run(argc, argv, std::cout, std::cerr); }
