#include "opshare/tools/cli.hpp"

int main(int argc, char** argv) { return opshare::tools::run_cli(argc, argv); }
