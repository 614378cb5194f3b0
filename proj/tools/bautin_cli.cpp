#include "bautin/cli.hpp"

int main(int argc, char** argv) { return bautin::cli::run(argc, argv); }
