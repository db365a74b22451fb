#include "offload/cli.hpp"

int main(int argc, char** argv) { return offload::cli_main(argc, argv); }
