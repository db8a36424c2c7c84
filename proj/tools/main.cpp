#include "kgen_cli.hpp"

int main(int argc, char** argv) { return kgen::cli::run(argc, argv); }
