#include "cli.hpp"

int main(int argc, char** argv)
{
    return windpart::cli::run(argc, argv);
}
