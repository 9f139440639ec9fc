#include "orbitcox/cli/commands.hpp"

int main(int argc, char** argv) { return orbitcox::cli::main(argc, argv); }
