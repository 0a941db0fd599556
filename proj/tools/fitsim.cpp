#include "fitsd/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return fitsd::cli_main(argc, argv, std::cout, std::cerr);
}
