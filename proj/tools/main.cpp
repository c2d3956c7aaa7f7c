#include "imdd/cli.hpp"

int main(int argc, char** argv) { return imdd::cli::run(argc, argv); }
