#include "normalign/cli.hpp"

#include <iostream>

int main( int argc, char** argv )
{
    return normalign::cli::run( argc, argv, std::cout, std::cerr );
}
