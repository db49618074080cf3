#include "wvrep/cli.hpp"

int main(int argc, char** argv) { return wvrep::cli::run(argc, argv); }
