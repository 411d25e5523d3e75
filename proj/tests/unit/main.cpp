#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"
#include "polarlattice/backend.hpp"

int main(int argc, char** argv) {
  polarlattice::reexec_with_working_blas(argv);
  doctest::Context context(argc, argv);
  return context.run();
}
