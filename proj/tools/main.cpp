#include "owf/cli.hpp"

int main(int argc, char** argv) { return owf::cli::run(argc, argv); }
