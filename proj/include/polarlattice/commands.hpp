#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polarlattice/cavity.hpp"
#include "polarlattice/collective.hpp"
#include "polarlattice/config.hpp"
#include "polarlattice/io.hpp"
#include "polarlattice/lattice.hpp"
#include "polarlattice/spectra.hpp"

namespace polarlattice {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_instability = 3,
  exit_validation = 4,
};

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> threads;
  bool seed_check = false;
  bool inject_fault = false;
};

/// Runs one CLI subcommand and maps failures onto exit codes. Reports go to
/// `out`, diagnostics to `err`.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

/// Lattice, couplings and collective modes for one configuration.
struct ModesBundle {
  Lattice lattice;
  CouplingMatrix coupling;
  CollectiveModes modes;
};

std::shared_ptr<const ModesBundle> compute_modes(const ExperimentConfig& c);

struct SpectrumResult {
  double omega_cav = 0.0;
  CavityMode cavity;
  PolaritonModes polaritons;
  Spectrum spectrum;
};

SpectrumResult compute_spectrum(const ExperimentConfig& c, const ModesBundle& b);

/// Pipeline stages writing into `dir`; each records its files there.
void write_modes_outputs(const ExperimentConfig& c, const ModesBundle& b,
                         const std::filesystem::path& dir, io::RunInfo& info);
void write_spectrum_outputs(const ExperimentConfig& c, const ModesBundle& b,
                            const SpectrumResult& r, const std::filesystem::path& dir);

}  // namespace polarlattice
