#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "json.hpp"

namespace polarlattice {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Vec3 = std::array<double, 3>;

/// Finite nx-by-ny square patch of identical dipoles in the xy-plane.
///
/// Molecule index j <-> (row, col) with j = row * nx + col; molecule j sits at
/// (x, y) = (a * col, a * row). Rows run along y, columns along x. Dipoles point
/// along z.
class Lattice {
 public:
  Lattice(std::size_t nx, std::size_t ny, double a_nm);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return nx_ * ny_; }
  double spacing() const noexcept { return a_; }

  std::size_t index(std::size_t row, std::size_t col) const noexcept {
    return row * nx_ + col;
  }
  std::size_t row(std::size_t j) const noexcept { return j / nx_; }
  std::size_t col(std::size_t j) const noexcept { return j % nx_; }

  Point position(std::size_t j) const noexcept {
    return {a_ * static_cast<double>(col(j)), a_ * static_cast<double>(row(j))};
  }
  const std::vector<Point>& positions() const noexcept { return positions_; }

  /// Geometric centre of the patch.
  Point centroid() const noexcept;

  double distance(std::size_t j, std::size_t l) const noexcept;

  static constexpr Vec3 dipole_axis() noexcept { return {0.0, 0.0, 1.0}; }

 private:
  std::size_t nx_;
  std::size_t ny_;
  double a_;
  std::vector<Point> positions_;
};

Lattice build_lattice(std::size_t nx, std::size_t ny, double a_nm);

/// Dense symmetric matrix of dipole-dipole strengths hbar*Omega_jl (meV),
/// zero on the diagonal.
struct CouplingMatrix {
  double omega0 = 0.0;
  Eigen::MatrixXd values;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(values.rows());
  }
  bool is_zero() const noexcept { return omega0 == 0.0 || values.isZero(0.0); }
};

/// Omega_jl = omega0 * (a / r_jl)^3 for every pair (dipoles perpendicular to
/// the plane, so the angular factor of the static Coulomb term is 1).
CouplingMatrix coupling_matrix(const Lattice& lat, double omega0_mev);

/// Static Coulomb dipole-dipole energy (meV) between dipoles d_j, d_l (e*nm)
/// separated by r (nm): [d_j.d_l - 3 (d_j.e)(d_l.e)] / (4 pi eps0 r^3).
double dipole_dipole_energy(const Vec3& d_j, const Vec3& d_l, const Vec3& r);

/// hbar*Omega0 = d^2 / (4 pi eps0 a^3) in meV, d in e*nm, a in nm.
double omega0_from_dipole(double d_e_nm, double a_nm);

/// Unordered pairs (j < l) with their separation, in row-major order.
std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>>
lattice_pairs(const Lattice& lat);

void to_json(nlohmann::json& j, const Lattice& lat);

}  // namespace polarlattice
