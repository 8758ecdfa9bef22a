#include "ctrlcap/cli/cli.hpp"

int main(int argc, char** argv) { return ctrlcap::cli::main(argc, argv); }
