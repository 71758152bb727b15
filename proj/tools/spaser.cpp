#include "spaser/cli/commands.hpp"

int main(int argc, char** argv) { return spaser::cli::run_app(argc, argv); }
