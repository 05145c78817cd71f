#include "blocksdp/cli.hpp"

int main(int argc, char** argv) { return blocksdp::cli::run(argc, argv); }
