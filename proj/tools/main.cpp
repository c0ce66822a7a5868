#include "metroflow/cli/app.hpp"

int main(int argc, char** argv) { return metroflow::cli::run(argc, argv); }
