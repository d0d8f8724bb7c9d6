#include "borno/cli.hpp"

int main(int argc, char** argv) { return borno::cli::main(argc, argv); }
