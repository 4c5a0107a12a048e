#include "ringres/cli.hpp"

int main(int argc, char** argv) { return ringres::cli::run(argc, argv); }
