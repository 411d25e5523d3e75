#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polarlattice/collective.hpp"
#include "polarlattice/hopfield.hpp"
#include "polarlattice/lattice.hpp"

namespace polarlattice {

inline constexpr double homogeneous_field = std::numeric_limits<double>::infinity();

/// Single cavity mode with a Gaussian in-plane coupling profile
///   g_j = g0 exp(-|r_j - center|^2 / (2 sigma_L^2)),
/// constant when sigma_L is infinite.
struct CavityMode {
  double omega_cav = 0.0;
  double sigma_L = homogeneous_field;
  Point center;
  Eigen::VectorXd g;
  double g_tot = 0.0;
  double g0 = 0.0;

  bool homogeneous() const noexcept { return std::isinf(sigma_L); }
};

/// Exactly one of the two must be set.
struct CouplingStrength {
  std::optional<double> g0;
  std::optional<double> g_tot;
};

/// `center` defaults to the lattice centroid.
CavityMode gaussian_coupling(const Lattice& lat, double omega_cav, double sigma_L,
                             CouplingStrength strength,
                             std::optional<Point> center = std::nullopt);

/// Couplings to the collective modes, G_n = sum_j g_j X_jn.
Eigen::VectorXd collective_couplings(const CavityMode& cav, const CollectiveModes& modes);

/// Closed-form polariton pair for one cavity mode and one collective mode.
/// Returns (W_plus, W_minus).
std::pair<double, double> two_mode_energies(double omega_cav, double W1, double G1);

/// Shifted cavity frequency omega_cav + 2 sum_j g_j^2 / omega_j.
double diamagnetic_cavity_frequency(const CavityMode& cav, std::span<const double> omega);

/// 2(N+1) Hopfield matrix in the collective basis; site 0 is the cavity.
HopfieldMatrix polariton_matrix(double omega_cav, const Eigen::VectorXd& W,
                                const Eigen::VectorXd& G);
HopfieldMatrix polariton_matrix(const CavityMode& cav, const CollectiveModes& modes);

/// Polariton modes, m = 0 highest. Coefficient rows are modes; zeta2/eta2
/// columns are collective modes.
struct PolaritonModes {
  Eigen::VectorXd Wm;
  Eigen::VectorXd zeta1;
  Eigen::VectorXd eta1;
  Eigen::MatrixXd zeta2;
  Eigen::MatrixXd eta2;
  Eigen::VectorXd photon_fraction;
  std::vector<bool> dark;

  std::size_t size() const noexcept { return static_cast<std::size_t>(Wm.size()); }
};

inline constexpr double dark_photon_fraction = 1e-12;

/// Solves the matrix as given (block structure is checked), through the
/// symmetric reduction.
PolaritonModes diagonalize_polaritons(const HopfieldMatrix& matrix);

/// Same problem, solved with the general 2(N+1) eigensolver. Small N only.
PolaritonModes diagonalize_polaritons_dense(const HopfieldMatrix& matrix);

struct PolaritonOptions {
  bool diamagnetic = false;
};

/// Cavity + collective modes with uncoupled and degenerate directions deflated.
PolaritonModes solve_polaritons(const CavityMode& cav, const CollectiveModes& modes,
                                const PolaritonOptions& options = {});

}  // namespace polarlattice
