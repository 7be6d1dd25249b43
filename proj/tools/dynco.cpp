#include "dynco/cli.hpp"

int main(int argc, char** argv) { return dynco::cli::run_cli(argc, argv); }
