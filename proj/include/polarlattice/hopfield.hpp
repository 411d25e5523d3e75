#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace polarlattice {

/// Quadratic bosonic Hamiltonian
///   H = sum_i w_i b_i^dag b_i + sum_{i<j} C_ij (b_i^dag + b_i)(b_j^dag + b_j).
/// `coupling` is symmetric with a zero diagonal.
struct QuadraticSystem {
  Eigen::VectorXd frequencies;
  Eigen::MatrixXd coupling;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(frequencies.size());
  }
};

/// The 2n x 2n Hopfield matrix of a QuadraticSystem. Site i occupies rows and
/// columns (2i, 2i+1):
///   diagonal block   [ w_i, 0 ; 0, -w_i ]
///   coupling block   [ C_ij, -C_ij ; C_ij, -C_ij ]   (i != j)
/// Eigenvectors are (alpha_1, beta_1, ..., alpha_n, beta_n).
class HopfieldMatrix {
 public:
  explicit HopfieldMatrix(Eigen::MatrixXd entries);

  static HopfieldMatrix from_system(const QuadraticSystem& system);

  const Eigen::MatrixXd& entries() const noexcept { return m_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  std::size_t modes() const noexcept {
    return static_cast<std::size_t>(m_.rows() / 2);
  }

  /// Reads back frequencies and couplings. Throws InvalidArgument when the
  /// entries deviate from the block layout by more than `tol` (absolute).
  QuadraticSystem structure(double tol = 0.0) const;

 private:
  Eigen::MatrixXd m_;
};

/// Positive-frequency normal modes. Row n of `alpha`/`beta` is mode n, which
/// satisfies sum_j (alpha_nj^2 - beta_nj^2) = 1. Frequencies descending.
struct BogoliubovModes {
  Eigen::VectorXd frequencies;
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd beta;
};

/// Reference route: general real non-symmetric eigensolve of the full Hopfield
/// matrix, positive branch kept, degenerate clusters orthonormalised in the
/// symplectic metric, then bosonic normalisation. O((2n)^3); meant for small n.
BogoliubovModes solve_dense(const HopfieldMatrix& h);

/// Normal modes in the quadrature form. With D = diag(w), the squared
/// frequencies are the eigenvalues of S = D^2 + 2 D^1/2 C D^1/2, and for unit
/// eigenvector y of S the Bogoliubov coefficients are
///   alpha + beta = sqrt(W / w) * y,   alpha - beta = sqrt(w / W) * y.
struct ReducedSolution {
  Eigen::VectorXd site_frequencies;
  Eigen::VectorXd frequencies;  // descending
  Eigen::MatrixXd vectors;      // column n: unit eigenvector of mode n
};

/// Dense symmetric route (LAPACK dsyevd on S). Throws InstabilityError if S
/// has a negative eigenvalue.
ReducedSolution solve_reduced(const QuadraticSystem& system);

/// Arrowhead variant of solve_reduced for one "hub" oscillator (index 0,
/// frequency w0) coupled to n independent oscillators (frequencies w_k) with
/// strengths c_k and no mutual coupling. Exactly-uncoupled directions and
/// degenerate clusters are deflated before the dense solve.
ReducedSolution solve_reduced_star(double w0, std::span<const double> w,
                                   std::span<const double> c);

BogoliubovModes to_bogoliubov(const ReducedSolution& s);

/// Deflation of a star (arrowhead) problem: independent oscillators grouped by
/// an exactly-shared real key (their diagonal element is a function of it),
/// with real border weights. Within each cluster the weight vector is rotated
/// onto a single direction; the orthogonal complement decouples exactly.
struct StarDeflation {
  struct Direction {
    std::size_t key_index;  // an original index carrying the cluster's key
    double weight;          // coupling of this direction (0 if decoupled)
    std::vector<std::pair<std::size_t, double>> combination;
  };
  std::vector<Direction> coupled;
  std::vector<Direction> decoupled;
};

StarDeflation deflate_star(std::span<const double> keys,
                           std::span<const double> weights,
                           double key_rel_tol = 1e-10,
                           double weight_rel_tol = 1e-12);

/// Indices of `values` (sorted descending) grouped into runs whose consecutive
/// relative gap is below `rel_tol`.
std::vector<std::vector<std::size_t>> degenerate_clusters(
    const Eigen::VectorXd& descending_values, double rel_tol);

}  // namespace polarlattice
