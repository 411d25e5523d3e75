#include "polarlattice/materials.hpp"

#include <cmath>

#include "polarlattice/errors.hpp"
#include "polarlattice/units.hpp"

namespace polarlattice {

FrequencyUnit frequency_unit_from_string(const std::string& s) {
  if (s == "meV") return FrequencyUnit::meV;
  if (s == "cm-1" || s == "cm^-1" || s == "inverse_cm") return FrequencyUnit::inverse_cm;
  throw InvalidArgument("unknown frequency unit '" + s + "' (expected meV or cm-1)");
}

std::string to_string(FrequencyUnit u) { return u == FrequencyUnit::meV ? "meV" : "cm-1"; }

double to_mev(double value, FrequencyUnit unit) {
  return unit == FrequencyUnit::meV ? value : units::mev_from_inverse_cm(value);
}

namespace {

void check(const PolarMaterial& m) {
  if (!(m.omega_T > 0.0)) throw InvalidArgument("omega_T must be positive");
  if (m.omega_L < m.omega_T) throw InvalidArgument("omega_L must not be below omega_T");
  if (!(m.eps_inf > 0.0)) throw InvalidArgument("eps_inf must be positive");
}

}  // namespace

double omega0_polar(const PolarMaterial& m) {
  check(m);
  return (m.omega_L * m.omega_L - m.omega_T * m.omega_T) / (8.0 * units::pi * m.omega_T);
}

double omega0_lorentz(const LorentzOscillator& m) {
  if (m.S < 0.0) throw InvalidArgument("oscillator strength S must be >= 0");
  if (!(m.omega_mol > 0.0)) throw InvalidArgument("omega_mol must be positive");
  if (!(m.eps_inf > 0.0)) throw InvalidArgument("eps_inf must be positive");
  return m.S * m.S / (8.0 * units::pi * m.omega_mol * m.eps_inf);
}

double dipole_per_cell(const PolarMaterial& m) {
  check(m);
  if (!m.V_cell_nm3) throw InvalidArgument("dipole_per_cell needs the unit-cell volume");
  if (!(*m.V_cell_nm3 > 0.0)) throw InvalidArgument("unit-cell volume must be positive");
  const double wl = to_mev(m.omega_L, m.unit);
  const double wt = to_mev(m.omega_T, m.unit);
  const double d2 = *m.V_cell_nm3 * units::eps0_e2_per_mev_nm * m.eps_inf *
                    (wl * wl - wt * wt) / (2.0 * wt);
  return std::sqrt(d2);
}

const std::vector<MaterialEntry>& builtin_materials() {
  static const std::vector<MaterialEntry> table = [] {
    std::vector<MaterialEntry> t;
    MaterialEntry sic{"SiC", "polar", {}, {}, "TO 793 / LO 969 cm-1"};
    sic.polar = {969.0, 793.0, 6.5, std::nullopt, FrequencyUnit::inverse_cm};
    t.push_back(sic);
    MaterialEntry hip{"hBN_in_plane", "polar", {}, {}, "TO 1360 / LO 1610 cm-1"};
    hip.polar = {1610.0, 1360.0, 4.9, std::nullopt, FrequencyUnit::inverse_cm};
    t.push_back(hip);
    // LO chosen to match Omega0 = 0.008 w_T; tabulated LO values vary (825-830).
    MaterialEntry hop{"hBN_out_of_plane", "polar", {}, {}, "TO 760 / LO 833 cm-1"};
    hop.polar = {833.0, 760.0, 2.95, std::nullopt, FrequencyUnit::inverse_cm};
    t.push_back(hop);
    MaterialEntry cbp{"CBP", "lorentz", {}, {}, "S 164 cm-1, w_mol 1504 cm-1, eps_inf 2.8"};
    cbp.lorentz = {164.0, 1504.0, 2.8, FrequencyUnit::inverse_cm};
    t.push_back(cbp);
    return t;
  }();
  return table;
}

const MaterialEntry& find_material(const std::string& name) {
  for (const auto& m : builtin_materials())
    if (m.name == name) return m;
  std::string known;
  for (const auto& m : builtin_materials()) known += (known.empty() ? "" : ", ") + m.name;
  throw InvalidArgument("unknown material '" + name + "' (built in: " + known + ")");
}

MaterialCoupling material_coupling(const MaterialEntry& m) {
  if (m.model == "polar") {
    return {to_mev(omega0_polar(m.polar), m.polar.unit), to_mev(m.polar.omega_T, m.polar.unit)};
  }
  if (m.model == "lorentz") {
    return {to_mev(omega0_lorentz(m.lorentz), m.lorentz.unit),
            to_mev(m.lorentz.omega_mol, m.lorentz.unit)};
  }
  throw InvalidArgument("material model must be polar or lorentz, got '" + m.model + "'");
}

}  // namespace polarlattice
