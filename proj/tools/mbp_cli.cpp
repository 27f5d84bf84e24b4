#include "mbp/cli.hpp"

int main(int argc, char** argv) { return mbp::run_cli(argc, argv); }
