#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "polarlattice/hopfield.hpp"
#include "polarlattice/lattice.hpp"

namespace polarlattice {

/// Folded, non-negative wavevector in nm^-1.
struct Wavevector {
  double kx = 0.0;
  double ky = 0.0;
  double norm() const noexcept;
};

/// Collective vibrational modes of a lattice, n = 0 is the highest frequency.
///
/// alpha(n, j), beta(n, j): Bogoliubov coefficients, sum_j alpha^2 - beta^2 = 1.
/// X(j, n): inverse of (alpha + beta), so b_j + b_j^dag = sum_n X_jn (P_n + P_n^dag).
/// Y(j, n): the same mode as a unit vector of the quadrature problem,
///   (alpha + beta)_nj = sqrt(W_n / omega_j) * Y_jn.
/// D(n) = sum_j X_jn, total dipole in units of the molecular dipole.
struct CollectiveModes {
  Eigen::VectorXd omega;
  Eigen::VectorXd W;
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd beta;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  Eigen::VectorXd D;
  std::vector<Wavevector> k;

  std::size_t size() const noexcept { return static_cast<std::size_t>(W.size()); }
};

/// Hopfield matrix of molecules with frequencies `omega` coupled by `coupling`.
HopfieldMatrix build_hopfield(std::span<const double> omega,
                              const CouplingMatrix& coupling);

/// Reference route: general 2N x 2N eigensolve of `h`.
CollectiveModes diagonalize_collective(const HopfieldMatrix& h, const Lattice& lat);

/// Fast route through the symmetric N x N problem omega^2 I + 2 omega Omega.
CollectiveModes reduced_symmetric_solve(double omega_mol, const CouplingMatrix& coupling,
                                        const Lattice& lat);

/// Same, for site-dependent frequencies.
CollectiveModes reduced_symmetric_solve(std::span<const double> omega,
                                        const CouplingMatrix& coupling,
                                        const Lattice& lat);

enum class DipoleConvention {
  /// X from bosonically normalised modes (the physical one; feeds the cavity
  /// couplings).
  bosonic,
  /// X from Hopfield eigenvectors normalised to unit Euclidean length,
  /// sum_j alpha^2 + beta^2 = 1.
  unit_norm_eigenvector,
};

/// Signed total dipoles D_n * d_mol.
Eigen::VectorXd total_dipoles(const CollectiveModes& modes, double d_mol = 1.0,
                              DipoleConvention convention = DipoleConvention::bosonic);

/// Dominant 2D Fourier component of each row of `alpha` laid out on the
/// lattice grid (real-to-complex FFT, no padding). Ties go to the smaller |k|,
/// then the smaller kx.
std::vector<Wavevector> mode_wavevectors(const Eigen::MatrixXd& alpha, const Lattice& lat);

struct DispersionPoint {
  double kmag;
  double W;
  std::size_t mode;
};

/// (|k_n|, W_n) for every mode, sorted by |k| (stable in n).
std::vector<DispersionPoint> dispersion_numeric(const CollectiveModes& modes);

/// Row-major alpha map of mode n, shaped ny x nx.
Eigen::MatrixXd mode_map(const CollectiveModes& modes, std::size_t n, const Lattice& lat);

}  // namespace polarlattice
