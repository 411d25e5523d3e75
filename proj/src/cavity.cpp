#include "polarlattice/cavity.hpp"

#include <cmath>
#include <string>

#include "polarlattice/errors.hpp"

namespace polarlattice {

using Eigen::Index;

CavityMode gaussian_coupling(const Lattice& lat, double omega_cav, double sigma_L,
                             CouplingStrength strength, std::optional<Point> center) {
  if (strength.g0.has_value() == strength.g_tot.has_value()) {
    throw InvalidArgument("give exactly one of g0 and g_tot");
  }
  if (!(sigma_L > 0.0)) throw InvalidArgument("sigma_L must be positive or infinite");
  if (!std::isfinite(omega_cav)) throw InvalidArgument("omega_cav must be finite");

  CavityMode cav;
  cav.omega_cav = omega_cav;
  cav.sigma_L = sigma_L;
  cav.center = center.value_or(lat.centroid());
  cav.g.resize(static_cast<Index>(lat.size()));
  for (std::size_t j = 0; j < lat.size(); ++j) {
    double p = 1.0;
    if (!cav.homogeneous()) {
      const Point r = lat.position(j);
      const double dx = r.x - cav.center.x, dy = r.y - cav.center.y;
      p = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_L * sigma_L));
    }
    cav.g(static_cast<Index>(j)) = p;
  }
  const double norm = cav.g.norm();
  if (strength.g0) {
    cav.g0 = *strength.g0;
    cav.g *= cav.g0;
    cav.g_tot = std::abs(cav.g0) * norm;
  } else {
    if (!(norm > 0.0)) {
      throw InvalidArgument("cavity profile vanishes on every molecule; cannot fix g_tot");
    }
    cav.g_tot = *strength.g_tot;
    cav.g0 = cav.g_tot / norm;
    cav.g *= cav.g0;
  }
  return cav;
}

Eigen::VectorXd collective_couplings(const CavityMode& cav, const CollectiveModes& modes) {
  if (cav.g.size() != modes.X.rows()) {
    throw InvalidArgument("cavity profile has " + std::to_string(cav.g.size()) +
                          " sites, modes have " + std::to_string(modes.X.rows()));
  }
  return modes.X.transpose() * cav.g;
}

std::pair<double, double> two_mode_energies(double omega_cav, double W1, double G1) {
  if (!(omega_cav > 0.0) || !(W1 > 0.0)) {
    throw InvalidArgument("two_mode_energies: frequencies must be positive");
  }
  const double c2 = omega_cav * omega_cav, w2 = W1 * W1;
  const double root =
      std::sqrt((c2 - w2) * (c2 - w2) + 16.0 * G1 * G1 * omega_cav * W1);
  const double plus = 0.5 * (c2 + w2 + root);
  const double minus = 0.5 * (c2 + w2 - root);
  if (minus < 0.0) {
    throw InstabilityError("lower polariton frequency squared is negative (" +
                               std::to_string(minus) + ")",
                           1);
  }
  return {std::sqrt(plus), std::sqrt(minus)};
}

double diamagnetic_cavity_frequency(const CavityMode& cav, std::span<const double> omega) {
  if (omega.size() != static_cast<std::size_t>(cav.g.size())) {
    throw InvalidArgument("diamagnetic shift: frequency count does not match the profile");
  }
  double d = 0.0;
  for (std::size_t j = 0; j < omega.size(); ++j) {
    const double g = cav.g(static_cast<Index>(j));
    d += g * g / omega[j];
  }
  return cav.omega_cav + 2.0 * d;
}

HopfieldMatrix polariton_matrix(double omega_cav, const Eigen::VectorXd& W,
                                const Eigen::VectorXd& G) {
  if (W.size() != G.size()) {
    throw InvalidArgument("polariton_matrix: " + std::to_string(W.size()) +
                          " mode frequencies but " + std::to_string(G.size()) + " couplings");
  }
  const Index n = W.size();
  QuadraticSystem sys{Eigen::VectorXd(n + 1), Eigen::MatrixXd::Zero(n + 1, n + 1)};
  sys.frequencies(0) = omega_cav;
  sys.frequencies.tail(n) = W;
  sys.coupling.row(0).tail(n) = G.transpose();
  sys.coupling.col(0).tail(n) = G;
  return HopfieldMatrix::from_system(sys);
}

HopfieldMatrix polariton_matrix(const CavityMode& cav, const CollectiveModes& modes) {
  return polariton_matrix(cav.omega_cav, modes.W, collective_couplings(cav, modes));
}

namespace {

PolaritonModes from_bogoliubov(const BogoliubovModes& b) {
  const Index n = b.alpha.cols() - 1;
  PolaritonModes pm;
  pm.Wm = b.frequencies;
  pm.zeta1 = b.alpha.col(0);
  pm.eta1 = b.beta.col(0);
  pm.zeta2 = b.alpha.rightCols(n);
  pm.eta2 = b.beta.rightCols(n);
  pm.photon_fraction = pm.zeta1.cwiseAbs2() - pm.eta1.cwiseAbs2();
  pm.dark.resize(pm.size());
  for (std::size_t m = 0; m < pm.size(); ++m)
    pm.dark[m] = pm.photon_fraction(static_cast<Index>(m)) < dark_photon_fraction;
  return pm;
}

}  // namespace

PolaritonModes diagonalize_polaritons(const HopfieldMatrix& matrix) {
  const double scale = matrix.entries().cwiseAbs().maxCoeff();
  return from_bogoliubov(to_bogoliubov(solve_reduced(matrix.structure(1e-12 * scale))));
}

PolaritonModes diagonalize_polaritons_dense(const HopfieldMatrix& matrix) {
  return from_bogoliubov(solve_dense(matrix));
}

PolaritonModes solve_polaritons(const CavityMode& cav, const CollectiveModes& modes,
                                const PolaritonOptions& options) {
  const Eigen::VectorXd G = collective_couplings(cav, modes);
  double wc = cav.omega_cav;
  if (options.diamagnetic) {
    wc = diamagnetic_cavity_frequency(
        cav, std::span<const double>(modes.omega.data(),
                                     static_cast<std::size_t>(modes.omega.size())));
  }
  const ReducedSolution r = solve_reduced_star(
      wc, std::span<const double>(modes.W.data(), modes.size()),
      std::span<const double>(G.data(), static_cast<std::size_t>(G.size())));
  return from_bogoliubov(to_bogoliubov(r));
}

}  // namespace polarlattice
