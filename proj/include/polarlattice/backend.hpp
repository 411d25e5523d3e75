#pragma once

#include <string>

namespace polarlattice {

/// Checks the LAPACK symmetric eigensolver on a fixed 256 x 256 problem (once
/// per process; the result is cached). When it fails, dense symmetric solves
/// fall back to Eigen, which is correct but several times slower.
bool lapack_backend_ok();

/// "lapack" or "eigen-fallback".
std::string symmetric_solver_name();

/// Some OpenBLAS builds pick a kernel that returns wrong eigenvectors on CPUs
/// they misdetect. If the self-test fails and OPENBLAS_CORETYPE is unset,
/// sets it and re-executes the current program (Linux only); otherwise
/// returns and the Eigen fallback is used. Call first thing in main().
void reexec_with_working_blas(char** argv);

}  // namespace polarlattice
