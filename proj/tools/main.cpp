#include "afkit/cli.hpp"

int main(int argc, char** argv) { return afkit::cli::dispatch_argv(argc, argv); }
