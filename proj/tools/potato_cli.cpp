#include "potato/cli.hpp"

int main(int argc, char** argv) { return potato::cli::run(argc, argv); }
