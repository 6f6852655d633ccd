#include "oamsim/cli.hpp"

int main(int argc, char** argv) { return oamsim::cli::run(argc, argv); }
