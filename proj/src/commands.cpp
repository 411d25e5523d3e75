#include "polarlattice/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "polarlattice/analytic.hpp"
#include "polarlattice/backend.hpp"
#include "polarlattice/errors.hpp"
#include "polarlattice/materials.hpp"
#include "polarlattice/units.hpp"
#include "polarlattice/validation.hpp"

namespace polarlattice {

namespace fs = std::filesystem;
using Eigen::Index;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) { return io::format_number(v); }

int dispersion_cutoff(const Lattice& lat) {
  return std::max(1, static_cast<int>(std::max(lat.nx(), lat.ny()) / 2));
}

const char* plot_modes_script = R"(# Generated by polarlattice. Data only; edit freely.
import csv, glob, sys
import matplotlib.pyplot as plt

def read(path):
    with open(path) as f:
        rows = [r for r in csv.reader(l for l in f if not l.startswith('#'))]
    return rows[0], [[float(x) for x in r] for r in rows[1:]]

_, disp = read('dispersion.csv')
plt.figure()
plt.plot([r[0] for r in disp], [r[1] for r in disp], 's', ms=2, label='numeric')
plt.plot([r[0] for r in disp], [r[3] for r in disp], '.', ms=2, label='infinite lattice')
plt.xlabel('|k| (1/nm)'); plt.ylabel('W (meV)'); plt.legend()
for path in sorted(glob.glob('maps/mode_*.csv')):
    _, m = read(path)
    nx = int(max(r[1] for r in m)) + 1
    ny = int(max(r[0] for r in m)) + 1
    grid = [[0.0] * nx for _ in range(ny)]
    for r in m:
        grid[int(r[0])][int(r[1])] = r[4]
    plt.figure(); plt.title(path); plt.imshow(grid, origin='lower', cmap='RdBu'); plt.colorbar()
plt.show() if '--show' in sys.argv else plt.savefig('modes.png')
)";

const char* plot_spectrum_script = R"(# Generated by polarlattice. Data only; edit freely.
import csv, sys
import matplotlib.pyplot as plt

with open('spectrum.csv') as f:
    rows = [r for r in csv.reader(l for l in f if not l.startswith('#'))][1:]
w = [float(r[0]) for r in rows]
s = [float(r[1]) for r in rows]
plt.plot(w, s)
plt.xlabel('omega (meV)'); plt.ylabel('S (normalized)')
plt.show() if '--show' in sys.argv else plt.savefig('spectrum.png')
)";

double cavity_frequency(const ExperimentConfig& c, const ModesBundle& b) {
  return c.cavity.resonant_W1 ? b.modes.W(0) : c.cavity.omega_cav_meV;
}

fs::path output_dir(const ExperimentConfig& c, const CommandOptions& o, const std::string& cmd) {
  if (o.out) return *o.out;
  if (c.output_dir) return *c.output_dir;
  return fs::path("polarlattice_out") / cmd;
}

unsigned worker_count(const ExperimentConfig& c, const CommandOptions& o) {
  if (o.threads && *o.threads > 0) return *o.threads;
  if (c.threads > 0) return c.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Modes depend only on lattice and molecular parameters, so sweep points
// that differ elsewhere share one diagonalisation.
class ModesCache {
 public:
  std::shared_ptr<const ModesBundle> get(const ExperimentConfig& c) {
    char key[256];
    std::snprintf(key, sizeof key, "%zu|%zu|%.17g|%.17g|%.17g", c.lattice.nx, c.lattice.ny,
                  c.lattice.a_nm, c.molecular.omega_mol_meV, c.molecular.omega0_meV);
    std::promise<std::shared_ptr<const ModesBundle>> promise;
    std::shared_future<std::shared_ptr<const ModesBundle>> future;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it == cache_.end()) {
        future = promise.get_future().share();
        cache_.emplace(key, future);
        owner = true;
      } else {
        future = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(compute_modes(c));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const ModesBundle>>> cache_;
};

void run_modes(const ExperimentConfig& c, const fs::path& dir, const std::string& command) {
  const auto t0 = Clock::now();
  io::RunInfo info{command, c.source, c.sha256, 0.0, {}};
  auto t = Clock::now();
  const auto b = compute_modes(c);
  info.stage_seconds["diagonalize"] = since(t);
  write_modes_outputs(c, *b, dir, info);
  info.wall_seconds = since(t0);
  io::write_manifest(dir, info);
}

void run_spectrum(const ExperimentConfig& c, const fs::path& dir, const std::string& command) {
  const auto t0 = Clock::now();
  io::RunInfo info{command, c.source, c.sha256, 0.0, {}};
  auto t = Clock::now();
  const auto b = compute_modes(c);
  info.stage_seconds["diagonalize"] = since(t);
  t = Clock::now();
  const SpectrumResult r = compute_spectrum(c, *b);
  info.stage_seconds["spectrum"] = since(t);
  t = Clock::now();
  write_spectrum_outputs(c, *b, r, dir);
  info.stage_seconds["write"] = since(t);
  info.wall_seconds = since(t0);
  io::write_manifest(dir, info);
}

void run_sweep(const ExperimentConfig& c, const fs::path& dir, unsigned workers) {
  if (c.sweep.empty()) throw ConfigError("sweep", "the sweep command needs at least one sweep axis");
  const auto t0 = Clock::now();
  const auto points = sweep_points(c.sweep);
  const std::size_t n = points.size();

  struct PointOutcome {
    double omega_cav = 0.0;
    double W1 = 0.0;
    std::vector<double> peaks;
    PeakSplit split;
    double seconds = 0.0;
    std::exception_ptr error;
  };
  std::vector<PointOutcome> outcomes(n);
  ModesCache cache;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto tp = Clock::now();
      try {
        const ExperimentConfig pc = parse_config(with_values(c.source, c.sweep, points[i]));
        const auto b = cache.get(pc);
        const SpectrumResult r = compute_spectrum(pc, *b);
        char name[32];
        std::snprintf(name, sizeof name, "point_%04zu", i + 1);
        write_spectrum_outputs(pc, *b, r, dir / "points" / name);
        PointOutcome& o = outcomes[i];
        o.omega_cav = r.omega_cav;
        o.W1 = b->modes.W(0);
        for (std::size_t k : find_peaks(r.spectrum)) o.peaks.push_back(r.spectrum.omega[k]);
        o.split = split_peaks(r.spectrum, r.omega_cav);
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
      outcomes[i].seconds = since(tp);
    }
  };
  const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& o : outcomes)
    if (o.error) std::rethrow_exception(o.error);

  std::vector<std::string> columns{"point"};
  for (const auto& a : c.sweep) columns.push_back(a.field);
  for (const char* col : {"omega_cav_meV", "W1_meV", "n_peaks", "peak_positions_meV",
                          "S_lower_max", "S_upper_max"})
    columns.push_back(col);
  io::CsvTable summary(c.sha256, columns);
  io::RunInfo info{"sweep", c.source, c.sha256, 0.0, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const PointOutcome& o = outcomes[i];
    std::vector<std::string> row{std::to_string(i + 1)};
    for (double v : points[i]) row.push_back(num(v));
    std::string peaks;
    for (double p : o.peaks) peaks += (peaks.empty() ? "" : ";") + num(p);
    row.insert(row.end(), {num(o.omega_cav), num(o.W1), std::to_string(o.peaks.size()), peaks,
                           num(o.split.lower), num(o.split.upper)});
    summary.add_row(row);
    char name[32];
    std::snprintf(name, sizeof name, "point_%04zu", i + 1);
    info.stage_seconds[name] = o.seconds;
  }
  io::write_atomic(dir / "sweep_summary.csv", summary.str());
  info.wall_seconds = since(t0);
  io::write_manifest(dir, info);
}

void run_criterion(const ExperimentConfig& c, std::ostream& out,
                   const std::optional<fs::path>& dir) {
  const double a = c.lattice.a_nm;
  const double o0 = c.molecular.omega0_meV;
  const double gamma = c.losses.gamma_meV;
  const double sigma = c.cavity.homogeneous ? homogeneous_field : c.cavity.sigma_L_over_a * a;
  const CriterionResult r = interaction_criterion(o0, a, sigma, gamma);
  const double critical_ratio = 2.0 * units::pi * o0 / gamma;

  out << "omega0_meV            " << num(o0) << "\n";
  out << "a_nm                  " << num(a) << "\n";
  out << "sigma_L_over_a        " << (c.cavity.homogeneous ? "homogeneous" : num(c.cavity.sigma_L_over_a)) << "\n";
  out << "gamma_meV             " << num(gamma) << "\n";
  out << "threshold_gamma_meV   " << num(r.threshold_gamma) << "\n";
  out << "critical_sigma_over_a " << num(critical_ratio) << "\n";
  out << "bandwidth_meV         " << num(r.threshold_gamma)
      << "  (2 pi Omega0 |k_max| a with |k_max| ~ 1/sigma_L)\n";
  out << "verdict               "
      << (r.holds ? "dipole-dipole interactions resolvable: model them explicitly"
                  : "dipole-dipole interactions hidden by the linewidth")
      << "\n";
  if (dir) {
    io::write_atomic(*dir / "criterion.json",
                     json{{"omega0_meV", o0},
                          {"a_nm", a},
                          {"sigma_L_over_a", c.cavity.homogeneous ? json("homogeneous")
                                                                   : json(c.cavity.sigma_L_over_a)},
                          {"gamma_meV", gamma},
                          {"threshold_gamma_meV", r.threshold_gamma},
                          {"critical_sigma_over_a", critical_ratio},
                          {"holds", r.holds},
                          {"config_sha256", c.sha256}}
                             .dump(2) + "\n");
    io::write_manifest(*dir, {"criterion", c.source, c.sha256, 0.0, {}});
  }
}

void print_material(const MaterialEntry& m, std::ostream& out) {
  out << m.name << " (" << m.model << ")";
  if (!m.note.empty()) out << "  [" << m.note << "]";
  out << "\n";
  const MaterialCoupling mc = material_coupling(m);
  if (m.model == "polar") {
    const double w = omega0_polar(m.polar);
    out << "  omega0 = " << num(w / m.polar.omega_T) << " omega_T = " << num(w) << " "
        << to_string(m.polar.unit) << " = " << num(mc.omega0_meV) << " meV\n";
    if (m.polar.V_cell_nm3) {
      const double d = dipole_per_cell(m.polar);
      out << "  d_u = " << num(d) << " e nm = " << num(d / units::debye_e_nm) << " D\n";
    }
  } else {
    const double w = omega0_lorentz(m.lorentz);
    out << "  omega0 = " << num(w / m.lorentz.omega_mol) << " omega_mol = " << num(w) << " "
        << to_string(m.lorentz.unit) << " = " << num(mc.omega0_meV) << " meV\n";
  }
}

bool run_validate(bool inject_fault, std::ostream& out) {
  bool ok = true;
  const auto t0 = Clock::now();
  out << "symmetric eigensolver: " << symmetric_solver_name() << "\n";
  run_validation({inject_fault}, [&](const CheckResult& r) {
    ok = ok && r.passed;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << secs << " s): " << r.detail << "\n";
    out.flush();
  });
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", since(t0));
  out << (ok ? "all checks passed" : "validation FAILED") << " in " << secs << " s\n";
  return ok;
}

// Runs `body` into a scratch directory and compares every output file.
std::string seed_check(const fs::path& dir, const std::function<void(const fs::path&)>& body) {
  fs::path scratch = dir;
  scratch += ".seed-check";
  fs::remove_all(scratch);
  body(scratch);
  const auto a = io::scan_outputs(dir), b = io::scan_outputs(scratch);
  std::string diff;
  std::map<std::string, std::string> first;
  for (const auto& f : a) first[f.path] = f.sha256;
  for (const auto& f : b) {
    auto it = first.find(f.path);
    if (it == first.end() || it->second != f.sha256) {
      diff = f.path;
      break;
    }
    first.erase(it);
  }
  if (diff.empty() && !first.empty()) diff = first.begin()->first;
  fs::remove_all(scratch);
  return diff;
}

}  // namespace

std::shared_ptr<const ModesBundle> compute_modes(const ExperimentConfig& c) {
  Lattice lat(c.lattice.nx, c.lattice.ny, c.lattice.a_nm);
  CouplingMatrix coupling = coupling_matrix(lat, c.molecular.omega0_meV);
  CollectiveModes modes = reduced_symmetric_solve(c.molecular.omega_mol_meV, coupling, lat);
  return std::make_shared<const ModesBundle>(
      ModesBundle{std::move(lat), std::move(coupling), std::move(modes)});
}

SpectrumResult compute_spectrum(const ExperimentConfig& c, const ModesBundle& b) {
  SpectrumResult r;
  r.omega_cav = cavity_frequency(c, b);
  const double sigma =
      c.cavity.homogeneous ? homogeneous_field : c.cavity.sigma_L_over_a * c.lattice.a_nm;
  r.cavity = gaussian_coupling(b.lattice, r.omega_cav, sigma, {std::nullopt, c.cavity.g_tot_meV},
                               c.cavity.center_nm);
  r.polaritons = solve_polaritons(r.cavity, b.modes, {c.cavity.diamagnetic});

  const std::vector<double> grid =
      c.spectrum.from_meV
          ? uniform_grid(*c.spectrum.from_meV, *c.spectrum.to_meV, c.spectrum.points)
          : default_grid(r.polaritons, c.losses.gamma_meV, c.spectrum.points);
  if (c.losses.method == SpectrumMethod::lorentzian_adhoc) {
    r.spectrum = spectral_function(r.polaritons, c.losses.gamma_meV, grid, c.spectrum.normalize);
  } else {
    CavityMode cav = r.cavity;
    if (c.cavity.diamagnetic) {
      cav.omega_cav = diamagnetic_cavity_frequency(
          cav, std::span<const double>(b.modes.omega.data(), b.modes.size()));
    }
    r.spectrum = spectral_function_lossy(cav, c.losses.kappa_meV, b.modes, b.coupling,
                                         c.losses.Gamma_meV, grid, c.spectrum.normalize);
    r.spectrum.gamma = c.losses.gamma_meV;
  }
  return r;
}

void write_modes_outputs(const ExperimentConfig& c, const ModesBundle& b, const fs::path& dir,
                         io::RunInfo& info) {
  const CollectiveModes& m = b.modes;
  const std::size_t n = m.size();
  auto t = Clock::now();

  std::vector<std::size_t> maps;
  for (std::size_t idx : c.mode_maps) {
    if (idx <= n) {
      maps.push_back(idx);
    } else if (c.mode_maps_explicit) {
      throw ConfigError("modes.maps", "mode index " + std::to_string(idx) +
                                          " exceeds the number of modes N = " + std::to_string(n));
    }
  }

  io::CsvTable modes_csv(c.sha256, {"n", "W_meV", "kx_invnm", "ky_invnm", "D_over_dmol"});
  for (std::size_t k = 0; k < n; ++k) {
    const Index i = static_cast<Index>(k);
    modes_csv.add_row(std::vector<double>{static_cast<double>(k + 1), m.W(i), m.k[k].kx,
                                          m.k[k].ky, m.D(i)});
  }
  io::write_atomic(dir / "modes.csv", modes_csv.str());

  for (std::size_t idx : maps) {
    io::CsvTable map(c.sha256, {"row", "col", "x_nm", "y_nm", "alpha"});
    for (std::size_t j = 0; j < b.lattice.size(); ++j) {
      const Point p = b.lattice.position(j);
      map.add_row(std::vector<double>{static_cast<double>(b.lattice.row(j)),
                                      static_cast<double>(b.lattice.col(j)), p.x, p.y,
                                      m.alpha(static_cast<Index>(idx - 1), static_cast<Index>(j))});
    }
    char name[32];
    std::snprintf(name, sizeof name, "mode_%04zu.csv", idx);
    io::write_atomic(dir / "maps" / name, map.str());
  }
  info.stage_seconds["modes_export"] = since(t);

  t = Clock::now();
  const DispersionParams p{c.molecular.omega_mol_meV, c.molecular.omega0_meV, c.lattice.a_nm,
                           dispersion_cutoff(b.lattice)};
  io::CsvTable disp(c.sha256, {"kmag_invnm", "kx_invnm", "ky_invnm", "omega_numeric_meV",
                               "omega_rwa_meV", "omega_full_meV", "omega_linear_meV"});
  for (const DispersionPoint& d : dispersion_numeric(m)) {
    const Wavevector k = m.k[d.mode];
    disp.add_row(std::vector<double>{d.kmag, k.kx, k.ky, d.W, dispersion_rwa(k, p),
                                     dispersion_full(k, p), dispersion_linear(d.kmag, p)});
  }
  io::write_atomic(dir / "dispersion.csv", disp.str());
  info.stage_seconds["dispersion"] = since(t);

  json lat;
  to_json(lat, b.lattice);
  io::write_atomic(dir / "lattice.json", lat.dump() + "\n");
  io::write_atomic(dir / "plot_modes.py", plot_modes_script);
}

void write_spectrum_outputs(const ExperimentConfig& c, const ModesBundle& b,
                            const SpectrumResult& r, const fs::path& dir) {
  const Spectrum& s = r.spectrum;
  io::CsvTable spec(c.sha256, {"omega_meV", "S_normalized", "S_raw"});
  for (std::size_t i = 0; i < s.omega.size(); ++i)
    spec.add_row(std::vector<double>{s.omega[i], s.S[i], s.S_raw[i]});
  io::write_atomic(dir / "spectrum.csv", spec.str());

  const PolaritonModes& pm = r.polaritons;
  io::CsvTable pol(c.sha256, {"m", "W_meV", "photon_fraction", "dark_flag"});
  for (std::size_t k = 0; k < pm.size(); ++k) {
    const Index i = static_cast<Index>(k);
    pol.add_row(std::vector<double>{static_cast<double>(k + 1), pm.Wm(i), pm.photon_fraction(i),
                                    pm.dark[k] ? 1.0 : 0.0});
  }
  io::write_atomic(dir / "polaritons.csv", pol.str());

  json sidecar = {
      {"method", to_string(s.method)},
      {"gamma_meV", c.losses.gamma_meV},
      {"kappa_meV", s.method == SpectrumMethod::complex_hamiltonian ? json(s.kappa) : json(nullptr)},
      {"Gamma_meV", s.method == SpectrumMethod::complex_hamiltonian ? json(s.Gamma) : json(nullptr)},
      {"omega_cav_meV", r.omega_cav},
      {"omega_cav_resonant_W1", c.cavity.resonant_W1},
      {"diamagnetic", c.cavity.diamagnetic},
      {"W1_meV", b.modes.W(0)},
      {"g_tot_meV", r.cavity.g_tot},
      {"g0_meV", r.cavity.g0},
      {"sigma_L_nm", r.cavity.homogeneous() ? json("homogeneous") : json(r.cavity.sigma_L)},
      {"center_nm", {r.cavity.center.x, r.cavity.center.y}},
      {"omega_mol_meV", c.molecular.omega_mol_meV},
      {"omega0_meV", c.molecular.omega0_meV},
      {"lattice", {{"nx", c.lattice.nx}, {"ny", c.lattice.ny}, {"a_nm", c.lattice.a_nm}}},
      {"grid", {{"from_meV", s.omega.front()}, {"to_meV", s.omega.back()}, {"points", s.omega.size()}}},
      {"normalized", s.normalized},
      {"raw_peak", s.raw_peak},
      {"config_sha256", c.sha256},
      {"config", c.source},
  };
  io::write_atomic(dir / "spectrum.json", sidecar.dump(2) + "\n");
  io::write_atomic(dir / "plot_spectrum.py", plot_spectrum_script);
}

int run_command(const std::string& command, const CommandOptions& o, std::ostream& out,
                std::ostream& err) {
  try {
    if (command == "validate") {
      return run_validate(o.inject_fault, out) ? exit_ok : exit_validation;
    }
    if (o.inject_fault) throw ConfigError("", "--inject-fault only applies to validate");

    const ExperimentConfig c = load_config(o.config);
    if (command == "criterion") {
      run_criterion(c, out, o.out);
      return exit_ok;
    }
    if (command == "material") {
      if (c.molecular.material) {
        print_material(*c.molecular.material, out);
      } else {
        out << "config sets omega0 directly (" << num(c.molecular.omega0_meV)
            << " meV); built-in materials:\n";
        for (const auto& m : builtin_materials()) print_material(m, out);
      }
      return exit_ok;
    }

    std::function<void(const fs::path&)> body;
    if (command == "modes") {
      body = [&](const fs::path& d) { run_modes(c, d, command); };
    } else if (command == "spectrum") {
      body = [&](const fs::path& d) { run_spectrum(c, d, command); };
    } else if (command == "sweep") {
      const unsigned workers = worker_count(c, o);
      body = [&, workers](const fs::path& d) { run_sweep(c, d, workers); };
    } else {
      throw ConfigError("", "unknown command '" + command + "'");
    }
    const fs::path dir = output_dir(c, o, command);
    body(dir);
    out << "wrote " << dir.string() << "\n";
    if (o.seed_check) {
      const std::string diff = seed_check(dir, body);
      if (!diff.empty()) {
        err << "seed check failed: " << diff << " differs between identical runs\n";
        return exit_validation;
      }
      out << "seed check passed: outputs are byte-identical across runs\n";
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const InstabilityError& e) {
    err << "numerical instability: " << e.what();
    if (e.mode() >= 0) err << " (mode " << e.mode() + 1 << ")";
    err << "\n";
    return exit_instability;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return exit_instability;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace polarlattice
