#include <iostream>

#include "photonsteer/app/cli.hpp"

int main(int argc, char** argv) { return photonsteer::run_cli(argc, argv, std::cout, std::cerr); }
