#include "kesbn/cli.hpp"

int main(int argc, char** argv) { return kesbn::run_cli(argc, argv); }
