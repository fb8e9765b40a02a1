#include <parityest/cli.hpp>

int main(int argc, char** argv) { return parityest::cli::run(argc, argv); }
