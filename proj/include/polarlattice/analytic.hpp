#pragma once

#include <cstddef>
#include <limits>

#include "polarlattice/collective.hpp"

namespace polarlattice {

/// Infinite square lattice of perpendicular dipoles, neighbour sum truncated
/// to offsets (m, n) in [-cutoff, cutoff]^2 without the origin.
struct DispersionParams {
  double omega_mol = 100.0;
  double omega0 = 1.0;
  double a = 0.5;
  int cutoff = 25;
};

/// sum (m^2 + n^2)^(-3/2) over the truncated offsets.
double lattice_sum_s3(int cutoff);

/// sum cos(k . r_mn) (a / r_mn)^3 over the truncated offsets.
double lattice_sum_cos(Wavevector k, double a, int cutoff);

/// Smallest cutoff (from `start`, doubling) at which the k = 0 full dispersion
/// changes by less than `tol` meV.
int converged_cutoff(const DispersionParams& p, double tol = 1e-4, int start = 25,
                     int max_cutoff = 1 << 16);

double dispersion_rwa(Wavevector k, const DispersionParams& p);

/// Nearest-neighbour chain: omega_mol + 2 Omega0 cos(k a).
double dispersion_rwa_chain(double k, const DispersionParams& p);

/// sqrt(omega_mol^2 + 2 omega_mol Omega0 sum cos(k . r)(a/r)^3). Throws
/// InstabilityError when the radicand is negative.
double dispersion_full(Wavevector k, const DispersionParams& p);

enum class LinearForm {
  /// omega(0) - 2 pi Omega0 a |k|
  main,
  /// omega(0) - 2 pi Omega0 a |k| * omega_mol / omega(0)
  appendix,
};

double dispersion_linear(double kmag, const DispersionParams& p,
                         LinearForm form = LinearForm::main);

struct CriterionResult {
  double threshold_gamma = 0.0;
  bool holds = false;
};

/// threshold = 2 pi Omega0 a / sigma_L; holds when threshold >= gamma.
/// sigma_L may be infinite (threshold 0, never holds for gamma > 0).
CriterionResult interaction_criterion(double omega0, double a, double sigma_L, double gamma);

}  // namespace polarlattice
