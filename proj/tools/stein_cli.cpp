#include "stein/cli.hpp"

int main(int argc, char** argv) { return stein::cli::main_impl(argc, argv); }
