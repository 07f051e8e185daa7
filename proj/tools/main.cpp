#include "hf/cli.hpp"

int main(int argc, char** argv) { return hf::cli::parse_and_dispatch(argc, argv); }
