#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polarlattice/cavity.hpp"
#include "polarlattice/collective.hpp"
#include "polarlattice/lattice.hpp"

namespace polarlattice {

enum class SpectrumMethod { lorentzian_adhoc, complex_hamiltonian };

std::string to_string(SpectrumMethod m);
SpectrumMethod spectrum_method_from_string(const std::string& s);

/// Optical spectrum sampled on `omega`. `S` is peak-normalised when
/// `normalized`; `S_raw` is always the unnormalised sum and `raw_peak` its max.
struct Spectrum {
  std::vector<double> omega;
  std::vector<double> S;
  std::vector<double> S_raw;
  bool normalized = false;
  double raw_peak = 0.0;
  SpectrumMethod method = SpectrumMethod::lorentzian_adhoc;
  double gamma = 0.0;
  double kappa = 0.0;
  double Gamma = 0.0;
};

/// Uniform grid over [min W - 5 gamma, max W + 5 gamma].
std::vector<double> default_grid(std::span<const double> W, double gamma,
                                 std::size_t points = 2001);
std::vector<double> default_grid(const PolaritonModes& pm, double gamma,
                                 std::size_t points = 2001);
std::vector<double> uniform_grid(double from, double to, std::size_t points);

/// Lorentzian sum, half-width gamma / 2, weighted by photon fraction.
Spectrum spectral_function(const PolaritonModes& pm, double gamma,
                           std::span<const double> grid, bool normalize = true);

/// Complex-frequency polariton modes: W_m with Re W_m > 0 and their photon
/// fractions (|zeta_1|^2 - |eta_1|^2 over the full norm).
struct LossyModes {
  Eigen::VectorXcd W;
  Eigen::VectorXd photon_fraction;
};

/// Molecular-basis 2(N+1) complex Hopfield problem with
/// omega_j -> omega_j + i Gamma/2 and omega_cav -> omega_cav + i kappa/2.
/// General eigensolver; small N only.
LossyModes lossy_modes_dense(const CavityMode& cav, double kappa,
                             std::span<const double> omega, const CouplingMatrix& coupling,
                             double Gamma);

/// The same problem for uniform molecular frequency and damping, reduced
/// through the real eigenbasis of the coupling matrix taken from `modes`
/// (an exact similarity transform), with uncoupled directions deflated.
LossyModes lossy_modes_reduced(const CavityMode& cav, double kappa,
                               const CollectiveModes& modes, double Gamma);

enum class LossyRoute { automatic, dense, reduced };

/// Largest lattice for which `automatic` picks the dense route.
inline constexpr std::size_t lossy_dense_max_sites = 64;

/// Loss-broadened spectrum, S = sum_m f_m Im W_m / ((w - Re W_m)^2 + Im W_m^2).
/// `modes` must be the collective modes of the same lattice and coupling
/// (needed by the reduced route).
Spectrum spectral_function_lossy(const CavityMode& cav, double kappa,
                                 const CollectiveModes& modes,
                                 const CouplingMatrix& coupling, double Gamma,
                                 std::span<const double> grid, bool normalize = true,
                                 LossyRoute route = LossyRoute::automatic);

Spectrum spectrum_from_lossy_modes(const LossyModes& lm, double kappa, double Gamma,
                                   std::span<const double> grid, bool normalize = true);

/// Local maxima of S (strict on the left, non-strict on the right) whose value
/// exceeds `min_rel` times the global maximum. Returns grid indices.
std::vector<std::size_t> find_peaks(const Spectrum& s, double min_rel = 0.05);

/// Max of S over grid points with omega < split and over omega >= split.
struct PeakSplit {
  double lower = 0.0;
  double upper = 0.0;
};
PeakSplit split_peaks(const Spectrum& s, double split);

/// Trapezoidal integral of S_raw.
double integrate_raw(const Spectrum& s);

}  // namespace polarlattice
