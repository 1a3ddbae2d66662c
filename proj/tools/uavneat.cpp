#include "uavneat/io/cli.hpp"

int main(int argc, char** argv) { return uavneat::io::run_cli(argc, argv); }
