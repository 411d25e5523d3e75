#include "polarlattice/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "polarlattice/errors.hpp"

namespace polarlattice {

using Eigen::Index;
using cd = std::complex<double>;

std::string to_string(SpectrumMethod m) {
  return m == SpectrumMethod::lorentzian_adhoc ? "lorentzian_adhoc" : "complex_hamiltonian";
}

SpectrumMethod spectrum_method_from_string(const std::string& s) {
  if (s == "lorentzian_adhoc") return SpectrumMethod::lorentzian_adhoc;
  if (s == "complex_hamiltonian") return SpectrumMethod::complex_hamiltonian;
  throw InvalidArgument("unknown spectrum method '" + s +
                        "' (expected lorentzian_adhoc or complex_hamiltonian)");
}

std::vector<double> uniform_grid(double from, double to, std::size_t points) {
  if (points < 2) throw InvalidArgument("a frequency grid needs at least 2 points");
  if (!(to > from)) throw InvalidArgument("frequency grid must be increasing");
  std::vector<double> g(points);
  const double step = (to - from) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = from + step * static_cast<double>(i);
  g.back() = to;
  return g;
}

std::vector<double> default_grid(std::span<const double> W, double gamma, std::size_t points) {
  if (W.empty()) throw InvalidArgument("default_grid: no modes");
  if (!(gamma > 0.0)) throw InvalidArgument("default_grid: gamma must be positive");
  const auto [lo, hi] = std::minmax_element(W.begin(), W.end());
  return uniform_grid(*lo - 5.0 * gamma, *hi + 5.0 * gamma, points);
}

std::vector<double> default_grid(const PolaritonModes& pm, double gamma, std::size_t points) {
  return default_grid(std::span<const double>(pm.Wm.data(), pm.size()), gamma, points);
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("empty frequency grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidArgument("frequency grid is not strictly increasing at index " +
                            std::to_string(i));
    }
  }
}

void finish(Spectrum& s, bool normalize) {
  s.raw_peak = s.S_raw.empty() ? 0.0 : *std::max_element(s.S_raw.begin(), s.S_raw.end());
  s.normalized = normalize && s.raw_peak > 0.0;
  s.S = s.S_raw;
  if (s.normalized)
    for (double& v : s.S) v /= s.raw_peak;
}

}  // namespace

Spectrum spectral_function(const PolaritonModes& pm, double gamma,
                           std::span<const double> grid, bool normalize) {
  if (!(gamma > 0.0)) throw InvalidArgument("spectral_function: gamma must be positive");
  check_grid(grid);
  Spectrum s;
  s.method = SpectrumMethod::lorentzian_adhoc;
  s.gamma = gamma;
  s.omega.assign(grid.begin(), grid.end());
  s.S_raw.assign(grid.size(), 0.0);
  const double hw = 0.5 * gamma;
  for (std::size_t m = 0; m < pm.size(); ++m) {
    const double f = pm.photon_fraction(static_cast<Index>(m));
    if (f == 0.0) continue;
    const double w = pm.Wm(static_cast<Index>(m));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = grid[i] - w;
      s.S_raw[i] += f * hw / (d * d + hw * hw);
    }
  }
  finish(s, normalize);
  return s;
}

LossyModes lossy_modes_dense(const CavityMode& cav, double kappa,
                             std::span<const double> omega, const CouplingMatrix& coupling,
                             double Gamma) {
  const auto n = static_cast<Index>(omega.size());
  if (coupling.size() != omega.size() || cav.g.size() != n) {
    throw InvalidArgument("lossy_modes_dense: cavity, frequencies and coupling differ in size");
  }
  if (kappa < 0.0 || Gamma < 0.0) throw InvalidArgument("loss rates must be non-negative");

  const Index dim = 2 * (n + 1);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  auto site_freq = [&](Index i) {
    return i == 0 ? cd(cav.omega_cav, 0.5 * kappa) : cd(omega[i - 1], 0.5 * Gamma);
  };
  auto site_coupling = [&](Index i, Index j) {
    if (i == 0) return cav.g(j - 1);
    if (j == 0) return cav.g(i - 1);
    return coupling.values(i - 1, j - 1);
  };
  for (Index i = 0; i <= n; ++i) {
    M(2 * i, 2 * i) = site_freq(i);
    M(2 * i + 1, 2 * i + 1) = -site_freq(i);
    for (Index j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double c = site_coupling(i, j);
      M(2 * i, 2 * j) = c;
      M(2 * i, 2 * j + 1) = -c;
      M(2 * i + 1, 2 * j) = c;
      M(2 * i + 1, 2 * j + 1) = -c;
    }
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, true);
  if (es.info() != Eigen::Success) {
    throw NumericalError("complex Hopfield eigensolve failed (dimension " +
                         std::to_string(dim) + ", max |entry| " +
                         std::to_string(M.cwiseAbs().maxCoeff()) + ")");
  }
  std::vector<Index> keep;
  for (Index i = 0; i < dim; ++i)
    if (es.eigenvalues()(i).real() > 0.0) keep.push_back(i);
  if (static_cast<Index>(keep.size()) != n + 1) {
    throw InstabilityError("complex Hopfield problem has " + std::to_string(keep.size()) +
                           " modes with positive real frequency, expected " +
                           std::to_string(n + 1));
  }
  std::stable_sort(keep.begin(), keep.end(), [&](Index a, Index b) {
    return es.eigenvalues()(a).real() > es.eigenvalues()(b).real();
  });

  LossyModes out{Eigen::VectorXcd(n + 1), Eigen::VectorXd(n + 1)};
  for (Index m = 0; m <= n; ++m) {
    const Eigen::VectorXcd v = es.eigenvectors().col(keep[m]);
    double norm = 0.0;
    for (Index i = 0; i <= n; ++i) norm += std::norm(v(2 * i)) - std::norm(v(2 * i + 1));
    if (!(norm > 0.0)) {
      throw InstabilityError("complex Hopfield mode with non-positive norm", static_cast<long>(m));
    }
    out.W(m) = es.eigenvalues()(keep[m]);
    out.photon_fraction(m) = (std::norm(v(0)) - std::norm(v(1))) / norm;
  }
  return out;
}

LossyModes lossy_modes_reduced(const CavityMode& cav, double kappa,
                               const CollectiveModes& modes, double Gamma) {
  const auto n = static_cast<Index>(modes.size());
  if (cav.g.size() != n) throw InvalidArgument("lossy_modes_reduced: profile size mismatch");
  if (kappa < 0.0 || Gamma < 0.0) throw InvalidArgument("loss rates must be non-negative");
  const double w = modes.omega(0);
  for (Index j = 1; j < n; ++j) {
    if (std::abs(modes.omega(j) - w) > 1e-12 * w) {
      throw InvalidArgument("lossy_modes_reduced needs a uniform molecular frequency");
    }
  }

  // Coupling-matrix eigenvalues mu_n = (W_n^2 - w^2) / (2 w); border weights
  // are the profile in the same eigenbasis.
  const Eigen::VectorXd mu = (modes.W.cwiseAbs2().array() - w * w) / (2.0 * w);
  const Eigen::VectorXd gq = modes.Y.transpose() * cav.g;
  // Clustered on W (monotone in mu, better conditioned as a key).
  const StarDeflation defl =
      deflate_star(std::span<const double>(modes.W.data(), modes.size()),
                   std::span<const double>(gq.data(), gq.size()), 1e-12, 1e-12);

  const cd wt(w, 0.5 * Gamma), wc(cav.omega_cav, 0.5 * kappa);
  const cd sqc = std::sqrt(wc), sqt = std::sqrt(wt);
  const auto kc = static_cast<Index>(defl.coupled.size());
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(kc + 1, kc + 1);
  S(0, 0) = wc * wc;
  for (Index e = 0; e < kc; ++e) {
    const auto& d = defl.coupled[e];
    S(e + 1, e + 1) = wt * wt + 2.0 * wt * mu(static_cast<Index>(d.key_index));
    S(0, e + 1) = S(e + 1, 0) = 2.0 * sqc * sqt * d.weight;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(S, true);
  if (es.info() != Eigen::Success) {
    throw NumericalError("reduced complex eigensolve failed (dimension " +
                         std::to_string(kc + 1) + ")");
  }

  const auto total = static_cast<Index>(kc + 1 + defl.decoupled.size());
  LossyModes out{Eigen::VectorXcd(total), Eigen::VectorXd::Zero(total)};
  for (Index m = 0; m <= kc; ++m) {
    const cd W = std::sqrt(es.eigenvalues()(m));
    const Eigen::VectorXcd& y = es.eigenvectors().col(m);
    // u = D^-1/2 y, v = D u / W.
    const cd u0 = y(0) / sqc, v0 = wc * u0 / W;
    const double cav_part = (u0 * std::conj(v0)).real();
    const double mol_part =
        (std::conj(wt / W) / std::abs(wt)).real() * y.tail(kc).squaredNorm();
    const double norm = cav_part + mol_part;
    if (!(norm > 0.0)) {
      throw InstabilityError("complex polariton mode with non-positive norm", static_cast<long>(m));
    }
    out.W(m) = W;
    out.photon_fraction(m) = cav_part / norm;
  }
  for (std::size_t i = 0; i < defl.decoupled.size(); ++i) {
    const double mk = mu(static_cast<Index>(defl.decoupled[i].key_index));
    out.W(kc + 1 + static_cast<Index>(i)) = std::sqrt(wt * wt + 2.0 * wt * mk);
  }
  return out;
}

Spectrum spectrum_from_lossy_modes(const LossyModes& lm, double kappa, double Gamma,
                                   std::span<const double> grid, bool normalize) {
  check_grid(grid);
  Spectrum s;
  s.method = SpectrumMethod::complex_hamiltonian;
  s.kappa = kappa;
  s.Gamma = Gamma;
  s.omega.assign(grid.begin(), grid.end());
  s.S_raw.assign(grid.size(), 0.0);
  for (Index m = 0; m < lm.W.size(); ++m) {
    const double f = lm.photon_fraction(m);
    const double re = lm.W(m).real(), im = lm.W(m).imag();
    if (f == 0.0 || !(re > 0.0)) continue;
    if (!(im > 0.0)) {
      throw InvalidArgument("lossy spectrum needs positive damping on every bright mode");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = grid[i] - re;
      s.S_raw[i] += f * im / (d * d + im * im);
    }
  }
  finish(s, normalize);
  return s;
}

Spectrum spectral_function_lossy(const CavityMode& cav, double kappa,
                                 const CollectiveModes& modes,
                                 const CouplingMatrix& coupling, double Gamma,
                                 std::span<const double> grid, bool normalize,
                                 LossyRoute route) {
  if (route == LossyRoute::automatic) {
    route = modes.size() <= lossy_dense_max_sites ? LossyRoute::dense : LossyRoute::reduced;
  }
  const LossyModes lm =
      route == LossyRoute::dense
          ? lossy_modes_dense(cav, kappa,
                              std::span<const double>(modes.omega.data(), modes.size()),
                              coupling, Gamma)
          : lossy_modes_reduced(cav, kappa, modes, Gamma);
  return spectrum_from_lossy_modes(lm, kappa, Gamma, grid, normalize);
}

std::vector<std::size_t> find_peaks(const Spectrum& s, double min_rel) {
  std::vector<std::size_t> out;
  if (s.S.size() < 3) return out;
  const double top = *std::max_element(s.S.begin(), s.S.end());
  for (std::size_t i = 1; i + 1 < s.S.size(); ++i) {
    if (s.S[i] > s.S[i - 1] && s.S[i] >= s.S[i + 1] && s.S[i] >= min_rel * top)
      out.push_back(i);
  }
  return out;
}

PeakSplit split_peaks(const Spectrum& s, double split) {
  PeakSplit p;
  for (std::size_t i = 0; i < s.omega.size(); ++i) {
    if (s.omega[i] < split)
      p.lower = std::max(p.lower, s.S[i]);
    else
      p.upper = std::max(p.upper, s.S[i]);
  }
  return p;
}

double integrate_raw(const Spectrum& s) {
  double total = 0.0;
  for (std::size_t i = 1; i < s.omega.size(); ++i)
    total += 0.5 * (s.S_raw[i] + s.S_raw[i - 1]) * (s.omega[i] - s.omega[i - 1]);
  return total;
}

}  // namespace polarlattice
