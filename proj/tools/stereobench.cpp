#include <iostream>

#include "stereobench/cli.hpp"

int main(int argc, char** argv) { return stereobench::dispatch(argc, argv, std::cout, std::cerr); }
