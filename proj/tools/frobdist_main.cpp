#include "frobdist/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return frobdist::cli::run_cli(argc, argv, std::cout, std::cerr);
}
