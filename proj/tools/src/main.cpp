#include "emt/cli.hpp"

int main(int argc, char** argv) { return emt::cli::run(argc, argv); }
