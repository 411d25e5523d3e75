#pragma once

#include <optional>
#include <string>
#include <vector>

namespace polarlattice {

enum class FrequencyUnit { meV, inverse_cm };

FrequencyUnit frequency_unit_from_string(const std::string& s);
std::string to_string(FrequencyUnit u);
double to_mev(double value, FrequencyUnit unit);

/// Single-phonon polar crystal. Frequencies share `unit`.
struct PolarMaterial {
  double omega_L = 0.0;
  double omega_T = 0.0;
  double eps_inf = 1.0;
  std::optional<double> V_cell_nm3;
  FrequencyUnit unit = FrequencyUnit::inverse_cm;
};

/// eps(w) = eps_inf + S^2 / (w_mol^2 - w^2 - i w gamma).
struct LorentzOscillator {
  double S = 0.0;
  double omega_mol = 0.0;
  double eps_inf = 1.0;
  FrequencyUnit unit = FrequencyUnit::inverse_cm;
};

/// (w_L^2 - w_T^2) / (8 pi w_T), in the material's unit.
double omega0_polar(const PolarMaterial& m);

/// S^2 / (8 pi w_mol eps_inf), in the oscillator's unit.
double omega0_lorentz(const LorentzOscillator& m);

/// Transition dipole per unit cell in e*nm:
///   d_u^2 = V eps0 eps_inf (w_L^2 - w_T^2) / (2 w_T)   (hbar = 1, energies in meV).
double dipole_per_cell(const PolarMaterial& m);

struct MaterialEntry {
  std::string name;
  std::string model;  // "polar" or "lorentz"
  PolarMaterial polar;
  LorentzOscillator lorentz;
  std::string note;
};

/// Built-in table: SiC, hBN in-plane, hBN out-of-plane, CBP.
const std::vector<MaterialEntry>& builtin_materials();
const MaterialEntry& find_material(const std::string& name);

/// Omega0 and the reference frequency (w_T or w_mol), both in meV.
struct MaterialCoupling {
  double omega0_meV;
  double reference_meV;
};
MaterialCoupling material_coupling(const MaterialEntry& m);

}  // namespace polarlattice
