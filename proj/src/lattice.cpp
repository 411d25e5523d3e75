#include "polarlattice/lattice.hpp"

#include <cmath>
#include <string>

#include "polarlattice/errors.hpp"
#include "polarlattice/units.hpp"

namespace polarlattice {

Lattice::Lattice(std::size_t nx, std::size_t ny, double a_nm)
    : nx_(nx), ny_(ny), a_(a_nm) {
  if (nx == 0 || ny == 0) {
    throw InvalidArgument("lattice dimensions must be positive, got " +
                          std::to_string(nx) + "x" + std::to_string(ny));
  }
  if (!(a_nm > 0.0) || !std::isfinite(a_nm)) {
    throw InvalidArgument("lattice constant must be positive and finite");
  }
  positions_.reserve(size());
  for (std::size_t j = 0; j < size(); ++j) positions_.push_back(position(j));
}

Point Lattice::centroid() const noexcept {
  return {0.5 * a_ * static_cast<double>(nx_ - 1),
          0.5 * a_ * static_cast<double>(ny_ - 1)};
}

double Lattice::distance(std::size_t j, std::size_t l) const noexcept {
  const double dc = static_cast<double>(col(j)) - static_cast<double>(col(l));
  const double dr = static_cast<double>(row(j)) - static_cast<double>(row(l));
  return a_ * std::hypot(dc, dr);
}

Lattice build_lattice(std::size_t nx, std::size_t ny, double a_nm) {
  return Lattice(nx, ny, a_nm);
}

CouplingMatrix coupling_matrix(const Lattice& lat, double omega0_mev) {
  if (!std::isfinite(omega0_mev)) {
    throw InvalidArgument("omega0 must be finite");
  }
  const auto n = static_cast<Eigen::Index>(lat.size());
  CouplingMatrix c{omega0_mev, Eigen::MatrixXd::Zero(n, n)};
  // (a/r)^3 depends only on the integer offset, so tabulate it once.
  const std::size_t nx = lat.nx();
  const std::size_t ny = lat.ny();
  Eigen::MatrixXd table(ny, nx);
  for (std::size_t dr = 0; dr < ny; ++dr) {
    for (std::size_t dc = 0; dc < nx; ++dc) {
      const double r2 = static_cast<double>(dr * dr + dc * dc);
      table(dr, dc) = r2 == 0.0 ? 0.0 : omega0_mev / (r2 * std::sqrt(r2));
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto rj = lat.row(j), cj = lat.col(j);
    for (Eigen::Index l = j + 1; l < n; ++l) {
      const auto rl = lat.row(l), cl = lat.col(l);
      const std::size_t dr = rj > rl ? rj - rl : rl - rj;
      const std::size_t dc = cj > cl ? cj - cl : cl - cj;
      const double v = table(dr, dc);
      c.values(j, l) = v;
      c.values(l, j) = v;
    }
  }
  return c;
}

double dipole_dipole_energy(const Vec3& d_j, const Vec3& d_l, const Vec3& r) {
  const double rr = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (!(rr > 0.0)) throw InvalidArgument("dipole separation must be non-zero");
  const Vec3 e{r[0] / rr, r[1] / rr, r[2] / rr};
  auto dot = [](const Vec3& u, const Vec3& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  };
  return units::coulomb_mev_nm *
         (dot(d_j, d_l) - 3.0 * dot(d_j, e) * dot(d_l, e)) / (rr * rr * rr);
}

double omega0_from_dipole(double d_e_nm, double a_nm) {
  if (!(a_nm > 0.0)) throw InvalidArgument("lattice constant must be positive");
  if (d_e_nm < 0.0) throw InvalidArgument("dipole magnitude must be >= 0");
  return units::coulomb_mev_nm * d_e_nm * d_e_nm / (a_nm * a_nm * a_nm);
}

std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>>
lattice_pairs(const Lattice& lat) {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> out;
  const std::size_t n = lat.size();
  out.reserve(n * (n - 1) / 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = j + 1; l < n; ++l)
      out.push_back({{j, l}, lat.distance(j, l)});
  return out;
}

void to_json(nlohmann::json& j, const Lattice& lat) {
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& p : lat.positions()) pos.push_back({p.x, p.y});
  j = nlohmann::json{{"nx", lat.nx()},
                     {"ny", lat.ny()},
                     {"a_nm", lat.spacing()},
                     {"positions", std::move(pos)}};
}

}  // namespace polarlattice
