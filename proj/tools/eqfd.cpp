#include "eqfd/cli.hpp"

int main(int argc, char** argv) { return eqfd::cli::run(argc, argv); }
