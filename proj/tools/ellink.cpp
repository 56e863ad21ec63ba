#include "ellink/cli.hpp"

int main(int argc, char** argv) { return ellink::main_cli(argc, argv); }
