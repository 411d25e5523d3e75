#pragma once

#include <Eigen/Dense>

namespace polarlattice::detail {

/// Eigen-decomposition of a real symmetric matrix (LAPACK dsyevd).
/// Eigenvalues ascending; eigenvectors in the columns of `vectors`.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

SymmetricEigen symmetric_eigen(Eigen::MatrixXd matrix);

}  // namespace polarlattice::detail
