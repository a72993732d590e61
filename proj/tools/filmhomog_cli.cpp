#include "filmhomog/cli.hpp"

int main(int argc, char** argv) { return filmhomog::cli_main(argc, argv); }
