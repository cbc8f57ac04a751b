#include "tsd/cli.hpp"

int main(int argc, char** argv) { return tsd::run_cli(argc, argv); }
