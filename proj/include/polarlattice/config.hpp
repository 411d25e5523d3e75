#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polarlattice/lattice.hpp"
#include "polarlattice/materials.hpp"
#include "polarlattice/spectra.hpp"

namespace polarlattice {

inline constexpr int config_version = 1;

struct LatticeConfig {
  std::size_t nx = 51;
  std::size_t ny = 51;
  double a_nm = 0.5;
};

struct MolecularConfig {
  double omega_mol_meV = 100.0;
  double omega0_meV = 1.0;
  std::optional<MaterialEntry> material;  // set when omega0 came from a material
};

struct CavityConfig {
  bool resonant_W1 = true;
  double omega_cav_meV = 0.0;  // used when !resonant_W1
  bool homogeneous = true;
  double sigma_L_over_a = 0.0;  // used when !homogeneous
  double g_tot_meV = 2.0;
  std::optional<Point> center_nm;
  bool diamagnetic = false;
};

struct LossConfig {
  double gamma_meV = 1.0;
  double kappa_meV = 1.0;
  double Gamma_meV = 1.0;
  SpectrumMethod method = SpectrumMethod::lorentzian_adhoc;
};

struct GridConfig {
  std::size_t points = 2001;
  std::optional<double> from_meV;
  std::optional<double> to_meV;
  bool normalize = true;
};

struct SweepAxis {
  std::string field;  // dotted path, e.g. "losses.gamma_meV"
  std::vector<double> values;
};

/// Parsed experiment description. `source` is the JSON it came from and
/// `sha256` the checksum of its canonical dump.
struct ExperimentConfig {
  LatticeConfig lattice;
  MolecularConfig molecular;
  CavityConfig cavity;
  LossConfig losses;
  GridConfig spectrum;
  std::vector<std::size_t> mode_maps{1, 50, 300, 1500};  // 1-based
  bool mode_maps_explicit = false;  // defaults beyond N are skipped, not errors
  std::vector<SweepAxis> sweep;
  std::optional<std::string> output_dir;
  unsigned threads = 0;
  nlohmann::json source;
  std::string sha256;
};

/// Throws ConfigError naming the offending field path.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Copy of `base` with each axis field set to the matching value.
nlohmann::json with_values(const nlohmann::json& base, const std::vector<SweepAxis>& axes,
                           const std::vector<double>& values);

/// Cartesian product of the axis values, first axis slowest.
std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis>& axes);

}  // namespace polarlattice
