#include "ganpred/cli.hpp"

int main(int argc, char** argv) { return ganpred::cli::run(argc, argv); }
