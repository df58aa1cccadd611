#include "icatopsis/cli.hpp"

int main(int argc, char** argv) { return icatopsis::cli::run(argc, argv); }
