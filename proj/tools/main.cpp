#include "dsf/cli.hpp"

int main(int argc, char** argv) { return dsf::parse_and_run(argc, argv); }
