#include "wfuse/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wfuse::cli::run_cli(argc, argv, std::cout, std::cerr); }
