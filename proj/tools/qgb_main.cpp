#include "qgb/cli.hpp"

int main(int argc, char** argv) { return qgb::run_cli(argc, argv); }
