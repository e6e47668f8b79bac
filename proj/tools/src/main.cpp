#include "maxplus_cli/commands.hpp"

int main(int argc, char** argv) { return maxplus::cli::run_cli(argc, argv); }
