#include "pdc/cli.hpp"

int main(int argc, char** argv) { return pdc::cli::main(argc, argv); }
