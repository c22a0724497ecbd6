#include "lapgrowth/cli.hpp"

int main(int argc, char** argv) { return lapgrowth::cli_main(argc, argv); }
