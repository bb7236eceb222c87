#include "occulp/cli.hpp"

int main(int argc, char** argv) { return occulp::cli::main(argc, argv); }
