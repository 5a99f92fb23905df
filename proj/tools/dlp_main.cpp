#include "dlp/cli/commands.hpp"

int main(int argc, char** argv) { return dlp::cli::run(argc, argv); }
