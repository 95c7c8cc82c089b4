#include <iostream>

#include "mine/cli.h"

int main(int argc, char** argv) { return mine::run_main(argc, argv, std::cout, std::cerr); }
