#include "cli.hpp"

int main(int argc, char** argv) {
    return stp::cli::run(argc, argv);
}
