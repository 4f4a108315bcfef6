#include "repinv/cli.hpp"

int main(int argc, char** argv) { return repinv::cli::run(argc, argv); }
