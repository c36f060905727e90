#include "armae/bench.hpp"

int main(int argc, char** argv) { return armae::cli_main(argc, argv); }
