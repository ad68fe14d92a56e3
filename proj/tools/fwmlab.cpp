#include "fwmlab/cli.hpp"

int main(int argc, char** argv) { return fwmlab::run_cli(argc, argv); }
