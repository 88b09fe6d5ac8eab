#include <zxalg/cli.hpp>

int main(int argc, char** argv) { return zxalg::cli::run(argc, argv); }
