#include "cli/commands.hpp"

int main(int argc, char** argv) { return mtkit::cli::run_cli(argc, argv); }
