#include "specweights/cli.hpp"

int main(int argc, char** argv) { return sw::cli_main(argc, argv); }
