#include "kras/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return kras::cli::dispatch({argv + 1, argv + argc}, std::cout, std::cerr);
}
