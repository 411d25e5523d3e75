#include "lapack.hpp"

#include <lapacke.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Eigenvalues>

#include "polarlattice/backend.hpp"
#include "polarlattice/errors.hpp"

namespace polarlattice {

namespace detail {

namespace {

SymmetricEigen lapack_eigen(Eigen::MatrixXd matrix) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  SymmetricEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                         matrix.data(), n, out.values.data());
  if (info != 0) {
    throw NumericalError("dsyevd failed with info = " + std::to_string(info));
  }
  out.vectors = std::move(matrix);
  return out;
}

bool self_test() {
  // Dense, well-spread spectrum; large enough to reach the blocked code paths.
  const Eigen::Index n = 256;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      a(i, j) = a(j, i) = (i == j ? 4.0 + 0.01 * static_cast<double>(i) : 0.0) +
                          std::cos(0.37 * static_cast<double>(i * j + 1)) / std::sqrt(1.0 + std::abs(static_cast<double>(i - j)));
  const SymmetricEigen e = lapack_eigen(a);
  const double scale = a.norm();
  const double resid = (a * e.vectors - e.vectors * e.values.asDiagonal()).norm();
  const double orth =
      (e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(n, n)).norm();
  return resid <= 1e-10 * scale && orth <= 1e-10;
}

}  // namespace

SymmetricEigen symmetric_eigen(Eigen::MatrixXd matrix) {
  if (lapack_backend_ok()) return lapack_eigen(std::move(matrix));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace detail

bool lapack_backend_ok() {
  static const bool ok = detail::self_test();
  return ok;
}

std::string symmetric_solver_name() {
  return lapack_backend_ok() ? "lapack" : "eigen-fallback";
}

void reexec_with_working_blas(char** argv) {
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr || lapack_backend_ok()) return;
  setenv("OPENBLAS_CORETYPE", "Haswell", 1);
  execv("/proc/self/exe", argv);
  // exec failed: carry on with the fallback
}

}  // namespace polarlattice
