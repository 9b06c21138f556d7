#include "bhflow/cli.hpp"

int main(int argc, char** argv) { return bhflow::run_cli(argc, argv); }
