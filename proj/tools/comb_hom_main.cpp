#include "combhom/runner.hpp"

int main(int argc, char** argv) { return combhom::cli::run_main(argc, argv); }
