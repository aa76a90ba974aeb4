#include "arminer/cli.hpp"

int main(int argc, char** argv) { return arminer::cli::run(argc, argv); }
