#include "flume/cli.hpp"

int main(int argc, char** argv) { return flume::run_cli(argc, argv); }
