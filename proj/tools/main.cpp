#include "cli.hpp"

int main(int argc, char** argv) { return dualpredict::cli::main(argc, argv); }
