#include "nlsgibbs/cli.hpp"

int main(int argc, char **argv) { return nlsgibbs::cli::run(argc, argv); }
