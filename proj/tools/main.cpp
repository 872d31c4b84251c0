#include "treejudge/cli.hpp"

int main(int argc, char** argv) { return treejudge::run_cli(argc, argv); }
