#include <iostream>

#include "robustpay/cli.hpp"

int main(int argc, char** argv) { return robustpay::cli::main_entry(argc, argv, std::cout, std::cerr); }
