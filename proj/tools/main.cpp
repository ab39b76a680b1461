#include "rtk/cli.hpp"

int main(int argc, char** argv) { return rtk::cli_main(argc, argv); }
