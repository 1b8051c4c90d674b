#include "bmo/cli.hpp"

int main(int argc, char** argv) { return bmo::cli::run(argc, argv); }
