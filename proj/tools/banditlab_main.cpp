#include "banditlab/cli.hpp"

int main(int argc, char** argv) { return banditlab::cli_main(argc, argv); }
