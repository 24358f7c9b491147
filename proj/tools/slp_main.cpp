#include "slpkit/cli.hpp"

int main(int argc, char** argv) { return slpkit::cli_main(argc, argv); }
