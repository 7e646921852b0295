#include "crisk/report.hpp"

int main(int argc, char** argv) { return crisk::report::cli_main(argc, argv); }
