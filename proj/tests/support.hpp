#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace testing {

/// Fixed-seed source for property tests so failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240917);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng());
}

/// Hopfield matrix built entry by entry, independent of the library's layout code.
inline Eigen::MatrixXd hopfield_by_hand(const Eigen::VectorXd& w, const Eigen::MatrixXd& c) {
  const Eigen::Index n = w.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(2 * i, 2 * i) = w(i);
    m(2 * i + 1, 2 * i + 1) = -w(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      m(2 * i, 2 * j) = c(i, j);
      m(2 * i + 1, 2 * j) = c(i, j);
      m(2 * i, 2 * j + 1) = -c(i, j);
      m(2 * i + 1, 2 * j + 1) = -c(i, j);
    }
  }
  return m;
}

/// Positive eigenvalues of a general real matrix, descending.
inline std::vector<double> positive_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i).real() > 0.0) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.rbegin(), out.rend());
  return out;
}

/// All eigenvalues, sorted by real part.
inline std::vector<std::complex<double>> all_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(),
            [](auto a, auto b) { return a.real() < b.real(); });
  return out;
}

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return m;
}

}  // namespace testing
