#include <iostream>

#include "radchem/cli.hpp"

int main(int argc, char** argv)
{
    return radchem::run_cli(argc, argv, std::cout, std::cerr);
}
