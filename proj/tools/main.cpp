#include "agedelay/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return agedelay::run_cli(argc, argv, std::cout, std::cerr);
}
