#include "polarlattice/hopfield.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lapack.hpp"
#include "polarlattice/errors.hpp"

namespace polarlattice {

using Eigen::Index;

HopfieldMatrix::HopfieldMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() % 2 != 0) {
    throw InvalidArgument("Hopfield matrix must be square with even dimension");
  }
}

HopfieldMatrix HopfieldMatrix::from_system(const QuadraticSystem& system) {
  const Index n = system.frequencies.size();
  if (system.coupling.rows() != n || system.coupling.cols() != n) {
    throw InvalidArgument("coupling matrix is " +
                          std::to_string(system.coupling.rows()) + "x" +
                          std::to_string(system.coupling.cols()) + ", expected " +
                          std::to_string(n) + "x" + std::to_string(n));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    m(2 * i, 2 * i) = system.frequencies(i);
    m(2 * i + 1, 2 * i + 1) = -system.frequencies(i);
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double c = system.coupling(i, j);
      m(2 * i, 2 * j) = c;
      m(2 * i, 2 * j + 1) = -c;
      m(2 * i + 1, 2 * j) = c;
      m(2 * i + 1, 2 * j + 1) = -c;
    }
  }
  return HopfieldMatrix(std::move(m));
}

QuadraticSystem HopfieldMatrix::structure(double tol) const {
  const Index n = m_.rows() / 2;
  QuadraticSystem s{Eigen::VectorXd(n), Eigen::MatrixXd::Zero(n, n)};
  auto require = [tol](double got, double want, Index r, Index c) {
    if (std::abs(got - want) > tol) {
      throw InvalidArgument("entry (" + std::to_string(r) + ", " +
                            std::to_string(c) +
                            ") breaks the Hopfield block layout");
    }
  };
  for (Index i = 0; i < n; ++i) {
    const double w = m_(2 * i, 2 * i);
    require(m_(2 * i + 1, 2 * i + 1), -w, 2 * i + 1, 2 * i + 1);
    require(m_(2 * i, 2 * i + 1), 0.0, 2 * i, 2 * i + 1);
    require(m_(2 * i + 1, 2 * i), 0.0, 2 * i + 1, 2 * i);
    s.frequencies(i) = w;
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double c = m_(2 * i, 2 * j);
      require(m_(2 * i, 2 * j + 1), -c, 2 * i, 2 * j + 1);
      require(m_(2 * i + 1, 2 * j), c, 2 * i + 1, 2 * j);
      require(m_(2 * i + 1, 2 * j + 1), -c, 2 * i + 1, 2 * j + 1);
      if (i < j) require(m_(2 * j, 2 * i), c, 2 * j, 2 * i);
      s.coupling(i, j) = c;
    }
  }
  return s;
}

std::vector<std::vector<std::size_t>> degenerate_clusters(
    const Eigen::VectorXd& v, double rel_tol) {
  std::vector<std::vector<std::size_t>> out;
  for (Index i = 0; i < v.size(); ++i) {
    const bool joins =
        i > 0 && std::abs(v(i) - v(i - 1)) <=
                     rel_tol * std::max(std::abs(v(i)), std::abs(v(i - 1)));
    if (!joins) out.emplace_back();
    out.back().push_back(static_cast<std::size_t>(i));
  }
  return out;
}

namespace {

double symplectic_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (Index k = 0; k < a.size(); k += 2) s += a(k) * b(k) - a(k + 1) * b(k + 1);
  return s;
}

}  // namespace

BogoliubovModes solve_dense(const HopfieldMatrix& h) {
  const Index n = static_cast<Index>(h.modes());
  Eigen::EigenSolver<Eigen::MatrixXd> es(h.entries(), true);
  if (es.info() != Eigen::Success) {
    throw NumericalError("non-symmetric eigensolver did not converge");
  }
  const Eigen::VectorXcd& ev = es.eigenvalues();

  std::vector<Index> positive;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i).real() <= 0.0) continue;
    if (std::abs(ev(i).imag()) > 1e-9 * std::abs(ev(i).real())) {
      throw InstabilityError("complex normal-mode frequency " +
                                 std::to_string(ev(i).real()) + " + " +
                                 std::to_string(ev(i).imag()) + "i",
                             static_cast<long>(positive.size()));
    }
    positive.push_back(i);
  }
  if (static_cast<Index>(positive.size()) != n) {
    throw InstabilityError("found " + std::to_string(positive.size()) +
                           " positive frequencies, expected " +
                           std::to_string(n));
  }
  std::stable_sort(positive.begin(), positive.end(), [&](Index a, Index b) {
    return ev(a).real() > ev(b).real();
  });

  BogoliubovModes out;
  out.frequencies.resize(n);
  std::vector<Eigen::VectorXd> vecs;
  vecs.reserve(n);
  for (Index k = 0; k < n; ++k) {
    out.frequencies(k) = ev(positive[k]).real();
    Eigen::VectorXcd v = es.eigenvectors().col(positive[k]);
    Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v(big)) / std::abs(v(big));
    vecs.push_back(v.real());
  }

  for (const auto& cluster : degenerate_clusters(out.frequencies, 1e-10)) {
    for (std::size_t a = 0; a < cluster.size(); ++a) {
      Eigen::VectorXd& va = vecs[cluster[a]];
      for (std::size_t b = 0; b < a; ++b) {
        const Eigen::VectorXd& vb = vecs[cluster[b]];
        va -= symplectic_dot(vb, va) * vb;
      }
      const double norm = symplectic_dot(va, va);
      if (!(norm > 0.0)) {
        throw InstabilityError("positive-frequency mode with non-positive norm",
                               static_cast<long>(cluster[a]));
      }
      va /= std::sqrt(norm);
    }
  }

  out.alpha.resize(n, n);
  out.beta.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      out.alpha(k, j) = vecs[k](2 * j);
      out.beta(k, j) = vecs[k](2 * j + 1);
    }
  }
  return out;
}

namespace {

void require_positive_frequencies(const Eigen::VectorXd& w) {
  for (Index i = 0; i < w.size(); ++i) {
    if (!(w(i) > 0.0) || !std::isfinite(w(i))) {
      throw InvalidArgument("oscillator frequency " + std::to_string(i) +
                            " must be positive and finite");
    }
  }
}

// Converts ascending eigenvalues of S into descending real frequencies.
ReducedSolution finish_reduced(Eigen::VectorXd site, detail::SymmetricEigen eig) {
  const Index n = eig.values.size();
  ReducedSolution out;
  out.site_frequencies = std::move(site);
  out.frequencies.resize(n);
  out.vectors = eig.vectors.rowwise().reverse();
  for (Index k = 0; k < n; ++k) {
    const double lam = eig.values(n - 1 - k);
    if (lam < 0.0) {
      throw InstabilityError("squared normal-mode frequency " +
                                 std::to_string(lam) + " is negative",
                             static_cast<long>(k));
    }
    out.frequencies(k) = std::sqrt(lam);
  }
  return out;
}

}  // namespace

ReducedSolution solve_reduced(const QuadraticSystem& system) {
  const Index n = system.frequencies.size();
  if (system.coupling.rows() != n || system.coupling.cols() != n) {
    throw InvalidArgument("coupling matrix dimension does not match frequencies");
  }
  require_positive_frequencies(system.frequencies);

  if (system.coupling.isZero(0.0)) {
    // Decoupled oscillators: identity assignment, ordered by frequency.
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return system.frequencies(a) > system.frequencies(b);
    });
    ReducedSolution out{system.frequencies, Eigen::VectorXd(n),
                        Eigen::MatrixXd::Zero(n, n)};
    for (Index k = 0; k < n; ++k) {
      out.frequencies(k) = system.frequencies(order[k]);
      out.vectors(order[k], k) = 1.0;
    }
    return out;
  }

  const Eigen::VectorXd root = system.frequencies.cwiseSqrt();
  Eigen::MatrixXd s = 2.0 * root.asDiagonal() * system.coupling * root.asDiagonal();
  s.diagonal() = system.frequencies.cwiseAbs2();
  return finish_reduced(system.frequencies, detail::symmetric_eigen(std::move(s)));
}

StarDeflation deflate_star(std::span<const double> keys,
                           std::span<const double> weights, double key_rel_tol,
                           double weight_rel_tol) {
  if (keys.size() != weights.size()) {
    throw InvalidArgument("deflate_star: keys and weights differ in length");
  }
  const std::size_t n = keys.size();
  double wnorm = 0.0;
  for (double w : weights) wnorm += w * w;
  wnorm = std::sqrt(wnorm);
  const double wcut = weight_rel_tol * wnorm;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });

  StarDeflation out;
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n) {
      const double k0 = keys[order[stop - 1]], k1 = keys[order[stop]];
      if (std::abs(k0 - k1) > key_rel_tol * std::max(std::abs(k0), std::abs(k1))) break;
      ++stop;
    }
    const std::size_t size = stop - start;
    Eigen::VectorXd w(size);
    for (std::size_t i = 0; i < size; ++i) {
      const double wi = weights[order[start + i]];
      w(i) = std::abs(wi) > wcut ? wi : 0.0;
    }
    const double norm = w.norm();
    const std::size_t rep = order[start];

    if (norm == 0.0) {
      for (std::size_t i = 0; i < size; ++i)
        out.decoupled.push_back({rep, 0.0, {{order[start + i], 1.0}}});
    } else if (size == 1) {
      out.coupled.push_back({rep, w(0), {{rep, 1.0}}});
    } else {
      const Eigen::VectorXd b1 = w / norm;
      StarDeflation::Direction bright{rep, norm, {}};
      for (std::size_t i = 0; i < size; ++i)
        bright.combination.push_back({order[start + i], b1(i)});
      out.coupled.push_back(std::move(bright));
      // Householder reflector mapping e1 onto -+b1; its other columns span the
      // complement of b1.
      Eigen::VectorXd v = b1;
      const double sgn = b1(0) >= 0.0 ? 1.0 : -1.0;
      v(0) += sgn;
      const double vv = v.squaredNorm();
      for (std::size_t col = 1; col < size; ++col) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(size);
        e(col) = 1.0;
        const Eigen::VectorXd hcol = e - (2.0 * v(col) / vv) * v;
        StarDeflation::Direction dark{rep, 0.0, {}};
        for (std::size_t i = 0; i < size; ++i)
          if (hcol(i) != 0.0) dark.combination.push_back({order[start + i], hcol(i)});
        out.decoupled.push_back(std::move(dark));
      }
    }
    start = stop;
  }
  return out;
}

ReducedSolution solve_reduced_star(double w0, std::span<const double> w,
                                   std::span<const double> c) {
  if (w.size() != c.size()) {
    throw InvalidArgument("solve_reduced_star: frequencies and couplings differ in length");
  }
  const std::size_t n = w.size();
  Eigen::VectorXd site(static_cast<Index>(n + 1));
  site(0) = w0;
  for (std::size_t k = 0; k < n; ++k) site(static_cast<Index>(k + 1)) = w[k];
  require_positive_frequencies(site);

  const StarDeflation defl = deflate_star(w, c, 1e-12, 1e-12);
  const auto kc = static_cast<Index>(defl.coupled.size());

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(kc + 1, kc + 1);
  s(0, 0) = w0 * w0;
  for (Index e = 0; e < kc; ++e) {
    const auto& d = defl.coupled[e];
    const double wk = w[d.key_index];
    s(e + 1, e + 1) = wk * wk;
    s(0, e + 1) = s(e + 1, 0) = 2.0 * std::sqrt(w0 * wk) * d.weight;
  }
  const detail::SymmetricEigen eig = detail::symmetric_eigen(std::move(s));

  struct Entry {
    double lambda;
    Eigen::VectorXd vec;
  };
  std::vector<Entry> entries;
  entries.reserve(n + 1);
  for (Index m = 0; m < kc + 1; ++m) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Index>(n + 1));
    full(0) = eig.vectors(0, m);
    for (Index e = 0; e < kc; ++e) {
      for (const auto& [idx, coef] : defl.coupled[e].combination)
        full(static_cast<Index>(idx + 1)) += eig.vectors(e + 1, m) * coef;
    }
    entries.push_back({eig.values(m), std::move(full)});
  }
  for (const auto& d : defl.decoupled) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Index>(n + 1));
    for (const auto& [idx, coef] : d.combination) full(static_cast<Index>(idx + 1)) = coef;
    const double wk = w[d.key_index];
    entries.push_back({wk * wk, std::move(full)});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.lambda > b.lambda; });

  ReducedSolution out;
  out.site_frequencies = std::move(site);
  out.frequencies.resize(static_cast<Index>(n + 1));
  out.vectors.resize(static_cast<Index>(n + 1), static_cast<Index>(n + 1));
  for (std::size_t m = 0; m < entries.size(); ++m) {
    if (entries[m].lambda < 0.0) {
      throw InstabilityError("squared normal-mode frequency " +
                                 std::to_string(entries[m].lambda) + " is negative",
                             static_cast<long>(m));
    }
    out.frequencies(static_cast<Index>(m)) = std::sqrt(entries[m].lambda);
    out.vectors.col(static_cast<Index>(m)) = entries[m].vec;
  }
  return out;
}

BogoliubovModes to_bogoliubov(const ReducedSolution& s) {
  const Index n = s.frequencies.size();
  const Index sites = s.site_frequencies.size();
  BogoliubovModes out{s.frequencies, Eigen::MatrixXd(n, sites),
                      Eigen::MatrixXd(n, sites)};
  for (Index m = 0; m < n; ++m) {
    const double wm = s.frequencies(m);
    for (Index j = 0; j < sites; ++j) {
      const double r = std::sqrt(wm / s.site_frequencies(j));
      const double y = s.vectors(j, m);
      out.alpha(m, j) = 0.5 * (r + 1.0 / r) * y;
      out.beta(m, j) = 0.5 * (r - 1.0 / r) * y;
    }
  }
  return out;
}

}  // namespace polarlattice
