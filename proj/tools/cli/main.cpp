#include "cli.hpp"

int main(int argc, char** argv) { return stereosal::cli::run_cli(argc, argv); }
