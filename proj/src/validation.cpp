#include "polarlattice/validation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "polarlattice/analytic.hpp"
#include "polarlattice/cavity.hpp"
#include "polarlattice/collective.hpp"
#include "polarlattice/errors.hpp"
#include "polarlattice/materials.hpp"
#include "polarlattice/spectra.hpp"
#include "polarlattice/units.hpp"

namespace polarlattice {

using Eigen::Index;

namespace {

constexpr double omega_mol = 100.0;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string lattice_name(std::size_t nx, std::size_t ny) {
  return std::to_string(nx) + "x" + std::to_string(ny);
}

// Worst deviation tracker; `fail` records the first case over tolerance.
struct Tally {
  double worst = 0.0;
  std::string fail;
  void add(double dev, double tol, const std::string& where) {
    worst = std::max(worst, dev);
    if (!(dev <= tol) && fail.empty()) fail = where + ": deviation " + fmt(dev) + " > " + fmt(tol);
  }
};

double bosonicity_error(const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& beta) {
  double e = 0.0;
  for (Index n = 0; n < alpha.rows(); ++n)
    e = std::max(e, std::abs(alpha.row(n).squaredNorm() - beta.row(n).squaredNorm() - 1.0));
  return e;
}

// |D| compared cluster by cluster: inside a degenerate cluster the split into
// individual modes is basis dependent, the multiset of |D| is not.
double dipole_mismatch(const CollectiveModes& a, const CollectiveModes& b) {
  double worst = 0.0;
  for (const auto& cl : degenerate_clusters(a.W, 1e-10)) {
    std::vector<double> da, db;
    for (std::size_t i : cl) {
      da.push_back(std::abs(a.D(static_cast<Index>(i))));
      db.push_back(std::abs(b.D(static_cast<Index>(i))));
    }
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    for (std::size_t i = 0; i < da.size(); ++i) worst = std::max(worst, std::abs(da[i] - db[i]));
  }
  return worst;
}

std::string check_symmetry(bool inject) {
  for (std::size_t nx = 1; nx <= 4; ++nx) {
    for (std::size_t ny = 1; ny <= 4; ++ny) {
      const Lattice lat(nx, ny, 0.5);
      CouplingMatrix c = coupling_matrix(lat, 1.0);
      if (inject && nx == 3 && ny == 3) c.values(1, 2) += 1e-9;
      for (Index j = 0; j < c.values.rows(); ++j) {
        if (c.values(j, j) != 0.0)
          return lattice_name(nx, ny) + ": diagonal entry (" + std::to_string(j) + ") is non-zero";
        for (Index l = j + 1; l < c.values.cols(); ++l) {
          if (c.values(j, l) != c.values(l, j)) {
            return lattice_name(nx, ny) + ": Omega(" + std::to_string(j) + ", " +
                   std::to_string(l) + ") != Omega(" + std::to_string(l) + ", " +
                   std::to_string(j) + ")";
          }
        }
      }
    }
  }
  // Chain closed form Omega0 / |j - l|^3.
  const Lattice chain(7, 1, 0.5);
  const CouplingMatrix c = coupling_matrix(chain, 1.0);
  for (Index j = 0; j < 7; ++j)
    for (Index l = 0; l < 7; ++l)
      if (j != l) {
        const double d = std::abs(static_cast<double>(j - l));
        if (std::abs(c.values(j, l) - 1.0 / (d * d * d)) > 1e-15)
          return "chain entry (" + std::to_string(j) + ", " + std::to_string(l) + ") off the 1/r^3 law";
      }
  return {};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> results;
  auto run = [&](const std::string& name, const std::function<std::string(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    r.name = name;
    try {
      std::string detail;
      const std::string failure = body(detail);
      r.passed = failure.empty();
      r.detail = failure.empty() ? detail : failure;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(r);
    if (on_result) on_result(r);
  };

  run("coupling_symmetry", [&](std::string& detail) {
    detail = "all lattices up to 4x4 symmetric, zero diagonal; chain follows 1/r^3";
    return check_symmetry(options.inject_fault);
  });

  // Reduced vs brute-force collective modes.
  run("collective_oracle", [&](std::string& detail) {
    Tally w, d, boson, xinv;
    for (std::size_t nx = 1; nx <= 4; ++nx) {
      for (std::size_t ny = 1; ny <= 4; ++ny) {
        for (double ratio : {0.0, 1e-3, 1e-2}) {
          const Lattice lat(nx, ny, 0.5);
          const CouplingMatrix c = coupling_matrix(lat, ratio * omega_mol);
          const std::vector<double> om(lat.size(), omega_mol);
          const CollectiveModes fast = reduced_symmetric_solve(omega_mol, c, lat);
          const CollectiveModes ref = diagonalize_collective(build_hopfield(om, c), lat);
          const std::string where = lattice_name(nx, ny) + " ratio " + fmt(ratio);
          w.add(((fast.W - ref.W).array() / ref.W.array()).abs().maxCoeff(), 1e-8, where + " W");
          d.add(dipole_mismatch(fast, ref), 1e-6, where + " |D|");
          boson.add(std::max(bosonicity_error(fast.alpha, fast.beta),
                             bosonicity_error(ref.alpha, ref.beta)),
                    1e-9, where + " bosonicity");
          const Index n = static_cast<Index>(lat.size());
          const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
          xinv.add(std::max((fast.X * (fast.alpha + fast.beta) - eye).cwiseAbs().maxCoeff(),
                            (ref.X * (ref.alpha + ref.beta) - eye).cwiseAbs().maxCoeff()),
                   1e-8, where + " X(alpha+beta)");
        }
      }
    }
    detail = "max rel dW " + fmt(w.worst) + ", max d|D| " + fmt(d.worst) + ", bosonicity " +
             fmt(boson.worst) + ", X inverse " + fmt(xinv.worst);
    for (const Tally* t : {&w, &d, &boson, &xinv})
      if (!t->fail.empty()) return t->fail;
    return std::string();
  });

  run("eigenvalue_pairing", [&](std::string& detail) {
    Tally t;
    for (std::size_t nx = 1; nx <= 4; ++nx) {
      for (std::size_t ny = 1; ny <= 4; ++ny) {
        const Lattice lat(nx, ny, 0.5);
        const std::vector<double> om(lat.size(), omega_mol);
        const HopfieldMatrix h = build_hopfield(om, coupling_matrix(lat, 1.0));
        Eigen::EigenSolver<Eigen::MatrixXd> es(h.entries(), false);
        std::vector<double> re;
        for (Index i = 0; i < es.eigenvalues().size(); ++i) {
          re.push_back(es.eigenvalues()(i).real());
          t.add(std::abs(es.eigenvalues()(i).imag()), 1e-9 * omega_mol,
                lattice_name(nx, ny) + " imaginary part");
        }
        std::sort(re.begin(), re.end());
        for (std::size_t i = 0; i < re.size(); ++i)
          t.add(std::abs(re[i] + re[re.size() - 1 - i]) / omega_mol, 1e-10,
                lattice_name(nx, ny) + " +W/-W pairing");
      }
    }
    detail = "max relative |W + W'| " + fmt(t.worst);
    return t.fail;
  });

  run("two_molecule_closed_form", [&](std::string& detail) {
    Tally t;
    for (double o0 : {1e-3, 0.1, 1.0, 10.0}) {
      const Lattice lat(2, 1, 0.5);
      const CollectiveModes m = reduced_symmetric_solve(omega_mol, coupling_matrix(lat, o0), lat);
      t.add(std::abs(m.W(0) - std::sqrt(omega_mol * omega_mol + 2 * omega_mol * o0)) / omega_mol,
            1e-13, "W+ at Omega0 " + fmt(o0));
      t.add(std::abs(m.W(1) - std::sqrt(omega_mol * omega_mol - 2 * omega_mol * o0)) / omega_mol,
            1e-13, "W- at Omega0 " + fmt(o0));
    }
    detail = "max relative deviation " + fmt(t.worst);
    return t.fail;
  });

  // Deflated polariton route vs the general 2(N+1) Hopfield solve.
  run("polariton_oracle", [&](std::string& detail) {
    Tally w, f, sum, norm;
    for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 3}, {4, 4}}) {
      const Lattice lat(nx, ny, 0.5);
      const CouplingMatrix c = coupling_matrix(lat, 1.0);
      const CollectiveModes modes = reduced_symmetric_solve(omega_mol, c, lat);
      for (double sigma : {homogeneous_field, 1.25, 0.5}) {
        for (double wc : {modes.W(0), 95.0}) {
          const CavityMode cav = gaussian_coupling(lat, wc, sigma, {std::nullopt, 2.0});
          const PolaritonModes fast = solve_polaritons(cav, modes);
          const PolaritonModes ref = diagonalize_polaritons_dense(polariton_matrix(cav, modes));
          const std::string where = lattice_name(nx, ny) + " sigma " + fmt(sigma) + " wc " + fmt(wc);
          w.add(((fast.Wm - ref.Wm).array() / ref.Wm.array()).abs().maxCoeff(), 1e-8, where + " W");
          for (const auto& cl : degenerate_clusters(ref.Wm, 1e-10)) {
            double fa = 0.0, fb = 0.0;
            for (std::size_t i : cl) {
              fa += fast.photon_fraction(static_cast<Index>(i));
              fb += ref.photon_fraction(static_cast<Index>(i));
            }
            f.add(std::abs(fa - fb), 1e-8, where + " photon fraction");
          }
          sum.add(std::abs(fast.photon_fraction.sum() - 1.0), 1e-6, where + " fast sum");
          sum.add(std::abs(ref.photon_fraction.sum() - 1.0), 1e-6, where + " dense sum");
          for (std::size_t m = 0; m < fast.size(); ++m) {
            const Index mi = static_cast<Index>(m);
            const double nrm = fast.zeta1(mi) * fast.zeta1(mi) - fast.eta1(mi) * fast.eta1(mi) +
                               fast.zeta2.row(mi).squaredNorm() - fast.eta2.row(mi).squaredNorm();
            norm.add(std::abs(nrm - 1.0), 1e-8, where + " normalisation");
          }
        }
      }
    }
    detail = "max rel dW " + fmt(w.worst) + ", photon fraction " + fmt(f.worst) +
             ", sum rule " + fmt(sum.worst) + ", normalisation " + fmt(norm.worst);
    for (const Tally* t : {&w, &f, &sum, &norm})
      if (!t->fail.empty()) return t->fail;
    return std::string();
  });

  run("two_mode_formula", [&](std::string& detail) {
    Tally t;
    for (Index n = 1; n <= 9; ++n) {
      Eigen::VectorXd W(n), G = Eigen::VectorXd::Zero(n);
      for (Index i = 0; i < n; ++i) W(i) = 108.0 - 1.3 * static_cast<double>(i);
      for (double g : {0.5, 2.0, 6.0}) {
        G(0) = g;
        const double wc = 104.0;
        const PolaritonModes pm = diagonalize_polaritons(polariton_matrix(wc, W, G));
        const auto [wp, wm] = two_mode_energies(wc, W(0), g);
        auto closest = [&](double x) {
          double best = 1e300;
          for (Index m = 0; m < pm.Wm.size(); ++m) best = std::min(best, std::abs(pm.Wm(m) - x) / x);
          return best;
        };
        const std::string where = "N " + std::to_string(n) + " G " + fmt(g);
        t.add(closest(wp), 1e-10, where + " W+");
        t.add(closest(wm), 1e-10, where + " W-");
      }
    }
    detail = "max relative deviation " + fmt(t.worst);
    return t.fail;
  });

  run("homogeneous_reduction", [&](std::string& detail) {
    // Omega0 = 0, uniform field: one bright pair, everything else dark at omega_mol.
    const Lattice lat(4, 4, 0.5);
    const CollectiveModes modes = reduced_symmetric_solve(omega_mol, coupling_matrix(lat, 0.0), lat);
    const CavityMode cav = gaussian_coupling(lat, omega_mol, homogeneous_field, {std::nullopt, 2.0});
    const PolaritonModes pm = solve_polaritons(cav, modes);
    const auto [wp, wm] = two_mode_energies(omega_mol, omega_mol, 2.0);
    Tally t;
    t.add(std::abs(pm.Wm(0) - wp), 1e-10, "upper polariton");
    t.add(std::abs(pm.Wm(pm.Wm.size() - 1) - wm), 1e-10, "lower polariton");
    for (Index m = 1; m + 1 < pm.Wm.size(); ++m) t.add(std::abs(pm.Wm(m) - omega_mol), 1e-10, "dark mode");
    detail = "max deviation " + fmt(t.worst) + " meV";
    return t.fail;
  });

  run("lorentzian_area_rule", [&](std::string& detail) {
    Tally t;
    const Lattice lat(4, 4, 0.5);
    const CollectiveModes modes = reduced_symmetric_solve(omega_mol, coupling_matrix(lat, 1.0), lat);
    for (double gamma : {0.24, 1.0, 3.0}) {
      const CavityMode cav = gaussian_coupling(lat, modes.W(0), 1.25, {std::nullopt, 2.0});
      const PolaritonModes pm = solve_polaritons(cav, modes);
      const double lo = pm.Wm.minCoeff() - 20 * gamma, hi = pm.Wm.maxCoeff() + 20 * gamma;
      const auto grid = uniform_grid(lo, hi, static_cast<std::size_t>((hi - lo) / (0.02 * gamma)) + 1);
      const Spectrum s = spectral_function(pm, gamma, grid, false);
      const double expect = units::pi * pm.photon_fraction.sum();
      t.add(std::abs(integrate_raw(s) - expect) / expect, 0.02, "gamma " + fmt(gamma));
    }
    detail = "max relative area error " + fmt(t.worst);
    return t.fail;
  });

  run("lossy_routes", [&](std::string& detail) {
    Tally t;
    for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{3, 3}, {4, 4}}) {
      const Lattice lat(nx, ny, 0.5);
      const CouplingMatrix c = coupling_matrix(lat, 1.0);
      const CollectiveModes modes = reduced_symmetric_solve(omega_mol, c, lat);
      for (double sigma : {homogeneous_field, 1.25}) {
        const CavityMode cav = gaussian_coupling(lat, modes.W(0), sigma, {std::nullopt, 2.0});
        const auto grid = uniform_grid(90.0, 115.0, 2001);
        const Spectrum a = spectral_function_lossy(cav, 1.0, modes, c, 1.0, grid, true, LossyRoute::dense);
        const Spectrum b = spectral_function_lossy(cav, 1.0, modes, c, 1.0, grid, true, LossyRoute::reduced);
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, std::abs(a.S[i] - b.S[i]));
        t.add(dev, 1e-8, lattice_name(nx, ny) + " sigma " + fmt(sigma));
        // Vanishing loss reproduces the lossless frequencies.
        const LossyModes lm = lossy_modes_reduced(cav, 1e-7, modes, 1e-7);
        const PolaritonModes pm = solve_polaritons(cav, modes);
        for (Index m = 0; m < lm.W.size(); ++m) {
          if (lm.photon_fraction(m) < 1e-6) continue;
          double best = 1e300;
          for (Index q = 0; q < pm.Wm.size(); ++q) best = std::min(best, std::abs(lm.W(m).real() - pm.Wm(q)));
          t.add(best, 1e-6, lattice_name(nx, ny) + " lossless limit");
        }
      }
    }
    detail = "max deviation " + fmt(t.worst);
    return t.fail;
  });

  run("material_regressions", [&](std::string& detail) {
    Tally t;
    const struct {
      const char* name;
      double expect;
    } cases[] = {{"SiC", 0.0196}, {"hBN_in_plane", 0.016}, {"hBN_out_of_plane", 0.008}, {"CBP", 1.7e-4}};
    std::string values;
    for (const auto& c : cases) {
      const MaterialEntry& m = find_material(c.name);
      const double v = m.model == "polar" ? omega0_polar(m.polar) / m.polar.omega_T
                                          : omega0_lorentz(m.lorentz) / m.lorentz.omega_mol;
      t.add(std::abs(v / c.expect - 1.0), 0.02, c.name);
      values += std::string(values.empty() ? "" : ", ") + c.name + " " + fmt(v);
    }
    // Round trip through the dipole per cell.
    PolarMaterial p = find_material("SiC").polar;
    p.V_cell_nm3 = 0.125;
    const double a = std::cbrt(*p.V_cell_nm3);
    const double via_dipole = omega0_from_dipole(dipole_per_cell(p), a) / p.eps_inf;
    t.add(std::abs(via_dipole / to_mev(omega0_polar(p), p.unit) - 1.0), 1e-10, "dipole round trip");
    detail = values;
    return t.fail;
  });

  run("analytic_limits", [&](std::string& detail) {
    Tally t;
    t.add(std::abs(lattice_sum_s3(1) - (4.0 + 4.0 / std::pow(2.0, 1.5))), 1e-14, "S3(1)");
    DispersionParams p{omega_mol, 1.0, 0.5, 1};
    t.add(std::abs(dispersion_rwa_chain(0.0, p) - (omega_mol + 2.0)), 1e-12, "chain k=0");
    p.cutoff = 25;
    t.add(std::abs(dispersion_rwa({0, 0}, p) - (omega_mol + lattice_sum_s3(25))), 1e-10, "rwa k=0");
    const CriterionResult r = interaction_criterion(1.0, 0.5, 1.25, 1.0);
    t.add(std::abs(r.threshold_gamma - 2.0 * units::pi / 2.5), 1e-12, "criterion threshold");
    detail = "max deviation " + fmt(t.worst);
    return t.fail;
  });

  return results;
}

}  // namespace polarlattice
