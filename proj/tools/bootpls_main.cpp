#include "bootpls/cli.h"

int main(int argc, char** argv) { return bootpls::cli::run(argc, argv); }
