#include "radsob/cli.hpp"

int main(int argc, char** argv) { return radsob::cli_main(argc, argv); }
