#include "fedhide/cli.hpp"

int main(int argc, char** argv) { return fedhide::cli_main(argc, argv); }
