#include <polyrefine/cli.hpp>

int main(int argc, char ** argv)
{
    return polyrefine::cli_main(argc, argv);
}
