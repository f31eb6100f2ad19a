#include "bdkit/cli/app.hpp"

int main(int argc, char** argv) { return bdkit::cli::run(argc, argv); }
