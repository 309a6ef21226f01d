#include "polyfreq/cli.hpp"

int main(int argc, char** argv) { return polyfreq::dispatch(argc, argv); }
