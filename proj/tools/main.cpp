#include "gkps/io.hpp"

int main(int argc, char** argv) { return gkps::run_cli(argc, argv); }
