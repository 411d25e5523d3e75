#pragma once

// Unit system: energies (and frequencies, hbar = 1) in meV, lengths in nm,
// dipoles in e*nm.

namespace polarlattice::units {

inline constexpr double pi = 3.14159265358979323846;

/// e^2 / (4 pi eps0) in meV*nm (CODATA 2018: 1.439964548 eV nm).
inline constexpr double coulomb_mev_nm = 1439.964548;

/// Vacuum permittivity in e^2 / (meV nm).
inline constexpr double eps0_e2_per_mev_nm = 1.0 / (4.0 * pi * coulomb_mev_nm);

/// 1 Debye in e*nm (3.33564e-30 C m / 1.602176634e-19 C / 1e-9 m).
inline constexpr double debye_e_nm = 0.0208194334;

/// Wavenumbers per meV (1 meV = 8.06554 cm^-1).
inline constexpr double inverse_cm_per_mev = 8.06554;

constexpr double mev_from_inverse_cm(double wavenumber) {
  return wavenumber / inverse_cm_per_mev;
}

constexpr double inverse_cm_from_mev(double energy) {
  return energy * inverse_cm_per_mev;
}

}  // namespace polarlattice::units
