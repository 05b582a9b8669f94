#include <iostream>
#include <string>
#include <vector>

#include "dkspin/cli.hpp"

int main(int argc, char** argv)
{
    return dk::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
