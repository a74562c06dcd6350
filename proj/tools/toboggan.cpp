#include "toboggan/cli.hpp"

int main(int argc, char** argv) { return toboggan::cli::run(argc, argv); }
