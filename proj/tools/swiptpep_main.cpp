#include "swiptpep/harness.hpp"

int main(int argc, char** argv) {
    return swiptpep::harness::cli_main(argc, argv);
}
