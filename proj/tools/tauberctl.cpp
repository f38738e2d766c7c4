#include "tauberkit/cli.hpp"

int main(int argc, char** argv) { return tk::cli::main_entry(argc, argv); }
