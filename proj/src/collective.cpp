#include "polarlattice/collective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polarlattice/errors.hpp"

namespace polarlattice {

using Eigen::Index;

double Wavevector::norm() const noexcept { return std::hypot(kx, ky); }

HopfieldMatrix build_hopfield(std::span<const double> omega,
                              const CouplingMatrix& coupling) {
  if (omega.size() != coupling.size()) {
    throw InvalidArgument("build_hopfield: " + std::to_string(omega.size()) +
                          " frequencies for a " + std::to_string(coupling.size()) +
                          "-site coupling matrix");
  }
  QuadraticSystem sys{Eigen::Map<const Eigen::VectorXd>(omega.data(),
                                                        static_cast<Index>(omega.size())),
                      coupling.values};
  for (Index i = 0; i < sys.frequencies.size(); ++i) {
    if (!(sys.frequencies(i) > 0.0)) {
      throw InvalidArgument("build_hopfield: frequency " + std::to_string(i) +
                            " is not positive");
    }
  }
  return HopfieldMatrix::from_system(sys);
}

namespace {

void check_sizes(std::size_t n_omega, std::size_t n_coupling, const Lattice& lat) {
  if (n_omega != lat.size() || n_coupling != lat.size()) {
    throw InvalidArgument("lattice has " + std::to_string(lat.size()) + " sites but got " +
                          std::to_string(n_omega) + " frequencies and a " +
                          std::to_string(n_coupling) + "-site coupling matrix");
  }
}

// Flip mode n so that sum_j (alpha + beta)_nj >= 0; dark modes get their
// largest component positive instead.
void fix_signs(CollectiveModes& m) {
  const Index n = m.W.size();
  for (Index k = 0; k < n; ++k) {
    const Eigen::VectorXd u = m.alpha.row(k) + m.beta.row(k);
    const double s = u.sum();
    double flip = 1.0;
    if (std::abs(s) > 1e-10 * u.cwiseAbs().sum()) {
      flip = s < 0.0 ? -1.0 : 1.0;
    } else {
      const double big = u.cwiseAbs().maxCoeff();
      for (Index j = 0; j < u.size(); ++j) {
        if (std::abs(u(j)) >= (1.0 - 1e-8) * big) {
          flip = u(j) < 0.0 ? -1.0 : 1.0;
          break;
        }
      }
    }
    if (flip < 0.0) {
      m.alpha.row(k) *= -1.0;
      m.beta.row(k) *= -1.0;
      m.Y.col(k) *= -1.0;
      if (m.X.size() != 0) m.X.col(k) *= -1.0;
    }
  }
}

void permute_modes(CollectiveModes& m, const std::vector<Index>& perm) {
  const Index n = static_cast<Index>(perm.size());
  CollectiveModes out;
  out.omega = m.omega;
  out.W.resize(n);
  out.alpha.resize(n, m.alpha.cols());
  out.beta.resize(n, m.beta.cols());
  out.X.resize(m.X.rows(), n);
  out.Y.resize(m.Y.rows(), n);
  out.k.resize(perm.size());
  for (Index i = 0; i < n; ++i) {
    const Index p = perm[i];
    out.W(i) = m.W(p);
    out.alpha.row(i) = m.alpha.row(p);
    out.beta.row(i) = m.beta.row(p);
    out.X.col(i) = m.X.col(p);
    out.Y.col(i) = m.Y.col(p);
    out.k[i] = m.k[p];
  }
  m = std::move(out);
}

// Wavevectors, reproducible ordering inside degenerate clusters, dipoles.
void finalize(CollectiveModes& m, const Lattice& lat, bool decoupled) {
  m.k = mode_wavevectors(m.alpha, lat);
  if (!decoupled) {
    std::vector<Index> perm(m.size());
    std::iota(perm.begin(), perm.end(), Index{0});
    bool moved = false;
    for (const auto& cluster : degenerate_clusters(m.W, 1e-10)) {
      if (cluster.size() < 2) continue;
      const auto first = perm.begin() + static_cast<std::ptrdiff_t>(cluster.front());
      const auto last = first + static_cast<std::ptrdiff_t>(cluster.size());
      std::stable_sort(first, last, [&](Index a, Index b) {
        if (m.k[a].kx != m.k[b].kx) return m.k[a].kx < m.k[b].kx;
        return m.k[a].ky < m.k[b].ky;
      });
      moved = moved || !std::is_sorted(first, last);
    }
    if (moved) permute_modes(m, perm);
  }
  m.D = m.X.colwise().sum().transpose();
}

}  // namespace

CollectiveModes reduced_symmetric_solve(std::span<const double> omega,
                                        const CouplingMatrix& coupling,
                                        const Lattice& lat) {
  check_sizes(omega.size(), coupling.size(), lat);
  QuadraticSystem sys{Eigen::Map<const Eigen::VectorXd>(omega.data(),
                                                        static_cast<Index>(omega.size())),
                      coupling.values};
  const ReducedSolution r = solve_reduced(sys);
  const BogoliubovModes b = to_bogoliubov(r);

  CollectiveModes m;
  m.omega = r.site_frequencies;
  m.W = r.frequencies;
  m.alpha = b.alpha;
  m.beta = b.beta;
  m.Y = r.vectors;
  fix_signs(m);

  // X = (alpha + beta)^-1 in closed form: X_jn = sqrt(omega_j / W_n) Y_jn.
  m.X = m.omega.cwiseSqrt().asDiagonal() * m.Y *
        m.W.cwiseSqrt().cwiseInverse().asDiagonal();
  finalize(m, lat, coupling.is_zero());
  return m;
}

CollectiveModes reduced_symmetric_solve(double omega_mol, const CouplingMatrix& coupling,
                                        const Lattice& lat) {
  const std::vector<double> omega(coupling.size(), omega_mol);
  return reduced_symmetric_solve(std::span<const double>(omega), coupling, lat);
}

CollectiveModes diagonalize_collective(const HopfieldMatrix& h, const Lattice& lat) {
  const QuadraticSystem sys = h.structure();
  check_sizes(sys.size(), sys.size(), lat);
  if (sys.coupling.isZero(0.0)) {
    const std::vector<double> omega(sys.frequencies.data(),
                                    sys.frequencies.data() + sys.frequencies.size());
    return reduced_symmetric_solve(std::span<const double>(omega),
                                   CouplingMatrix{0.0, sys.coupling}, lat);
  }

  const BogoliubovModes b = solve_dense(h);
  CollectiveModes m;
  m.omega = sys.frequencies;
  m.W = b.frequencies;
  m.alpha = b.alpha;
  m.beta = b.beta;
  const Eigen::MatrixXd u = m.alpha + m.beta;
  m.Y = (u * m.omega.cwiseSqrt().asDiagonal()).transpose() *
        m.W.cwiseSqrt().cwiseInverse().asDiagonal();
  fix_signs(m);
  m.X = (m.alpha + m.beta).partialPivLu().inverse();
  finalize(m, lat, false);
  return m;
}

Eigen::VectorXd total_dipoles(const CollectiveModes& modes, double d_mol,
                              DipoleConvention convention) {
  Eigen::VectorXd d = modes.D * d_mol;
  if (convention == DipoleConvention::unit_norm_eigenvector) {
    // Shrinking (alpha, beta) by 1/s scales X, hence D, by s.
    for (Index n = 0; n < d.size(); ++n) {
      d(n) *= std::sqrt(modes.alpha.row(n).squaredNorm() + modes.beta.row(n).squaredNorm());
    }
  }
  return d;
}

std::vector<DispersionPoint> dispersion_numeric(const CollectiveModes& modes) {
  std::vector<DispersionPoint> out;
  out.reserve(modes.size());
  for (std::size_t n = 0; n < modes.size(); ++n)
    out.push_back({modes.k[n].norm(), modes.W(static_cast<Index>(n)), n});
  std::stable_sort(out.begin(), out.end(), [](const DispersionPoint& a, const DispersionPoint& b) {
    return a.kmag < b.kmag;
  });
  return out;
}

Eigen::MatrixXd mode_map(const CollectiveModes& modes, std::size_t n, const Lattice& lat) {
  if (n >= modes.size()) {
    throw InvalidArgument("mode index " + std::to_string(n + 1) + " exceeds N = " +
                          std::to_string(modes.size()));
  }
  Eigen::MatrixXd grid(lat.ny(), lat.nx());
  for (std::size_t j = 0; j < lat.size(); ++j)
    grid(lat.row(j), lat.col(j)) = modes.alpha(static_cast<Index>(n), static_cast<Index>(j));
  return grid;
}

}  // namespace polarlattice
