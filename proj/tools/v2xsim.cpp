#include <iostream>

#include "v2x/cli/app.hpp"

extern char** environ;

int main(int argc, char** argv)
{
    return v2x::cli::run_cli(argc, argv, environ, std::cout, std::cerr);
}
