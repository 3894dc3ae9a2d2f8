#include "distreg/cli.hpp"

int main(int argc, char** argv) { return distreg::cli_main(argc, argv); }
