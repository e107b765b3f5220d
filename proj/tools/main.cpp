#include <iostream>

#include "fermitheta/cli.hpp"

int main(int argc, char** argv) { return fermitheta::cli::dispatch(argc, argv, std::cout, std::cerr); }
