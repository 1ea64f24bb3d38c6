#include "cli.hpp"

int main(int argc, char **argv) { return ewit::cli::dispatch(argc, argv, std::cout, std::cerr); }
