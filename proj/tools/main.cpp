#include "bohmlab/cli.hpp"

int main(int argc, char** argv) { return bohmlab::run_cli(argc, argv); }
