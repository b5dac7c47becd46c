#include "cliquelab/harness.hpp"

int main(int argc, char** argv) { return cliquelab::cli_main(argc, argv); }
