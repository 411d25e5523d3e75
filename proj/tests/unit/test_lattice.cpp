#include <cmath>
#include <map>

#include "doctest.h"
#include "polarlattice/errors.hpp"
#include "polarlattice/lattice.hpp"
#include "polarlattice/units.hpp"
#include "support.hpp"

using namespace polarlattice;

TEST_CASE("build_lattice: 51x51 patch") {
  const Lattice lat = build_lattice(51, 51, 0.5);
  CHECK(lat.size() == 2601);
  const Point last = lat.position(lat.size() - 1);
  CHECK(last.x == doctest::Approx(25.0));
  CHECK(last.y == doctest::Approx(25.0));
  CHECK(lat.centroid().x == doctest::Approx(12.5));
}

TEST_CASE("build_lattice: single molecule has no pairs") {
  const Lattice lat(1, 1, 0.5);
  CHECK(lat.size() == 1);
  CHECK(lattice_pairs(lat).empty());
  const CouplingMatrix c = coupling_matrix(lat, 1.0);
  CHECK(c.values.rows() == 1);
  CHECK(c.values(0, 0) == 0.0);
}

TEST_CASE("build_lattice: 2x2 has four sides and two diagonals") {
  const Lattice lat(2, 2, 0.5);
  const auto pairs = lattice_pairs(lat);
  REQUIRE(pairs.size() == 6);
  std::map<long, int> count;  // keyed by r in thousandths of a nm
  for (const auto& p : pairs) ++count[std::lround(p.second * 1000.0)];
  CHECK(count[500] == 4);
  CHECK(count[std::lround(std::sqrt(2.0) * 500.0)] == 2);
}

TEST_CASE("build_lattice: row-major indexing") {
  const Lattice lat(4, 3, 0.7);
  for (std::size_t j = 0; j < lat.size(); ++j) {
    CHECK(lat.index(lat.row(j), lat.col(j)) == j);
    CHECK(lat.position(j).x == doctest::Approx(0.7 * static_cast<double>(j % 4)));
    CHECK(lat.position(j).y == doctest::Approx(0.7 * static_cast<double>(j / 4)));
  }
}

TEST_CASE("build_lattice: invalid input") {
  CHECK_THROWS_AS(Lattice(0, 3, 0.5), InvalidArgument);
  CHECK_THROWS_AS(Lattice(3, 0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(Lattice(3, 3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Lattice(3, 3, -1.0), InvalidArgument);
}

TEST_CASE("coupling_matrix: inverse-cube values") {
  const Lattice lat(3, 3, 0.5);
  const CouplingMatrix c = coupling_matrix(lat, 2.0);
  CHECK(c.values(0, 1) == doctest::Approx(2.0));           // r = a
  CHECK(c.values(0, 2) == doctest::Approx(2.0 / 8.0));     // r = 2a
  CHECK(c.values(0, 4) == doctest::Approx(2.0 * 0.35355339059327373));  // r = sqrt(2) a
  CHECK(c.values(0, 8) == doctest::Approx(2.0 / std::pow(8.0, 1.5)));   // r = 2 sqrt(2) a
}

TEST_CASE("coupling_matrix: exact symmetry and zero diagonal") {
  for (int trial = 0; trial < 10; ++trial) {
    const Lattice lat(static_cast<std::size_t>(testing::uniform_int(1, 7)),
                      static_cast<std::size_t>(testing::uniform_int(1, 7)),
                      testing::uniform(0.2, 2.0));
    const CouplingMatrix c = coupling_matrix(lat, testing::uniform(-3.0, 3.0));
    CHECK((c.values - c.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coupling_matrix: entries decrease with distance, maximum is omega0") {
  const Lattice lat(5, 4, 0.5);
  const CouplingMatrix c = coupling_matrix(lat, 1.3);
  auto pairs = lattice_pairs(lat);
  std::sort(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return a.second < b.second; });
  double max_entry = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [jl, r] = pairs[i];
    const double v = c.values(static_cast<Eigen::Index>(jl.first), static_cast<Eigen::Index>(jl.second));
    max_entry = std::max(max_entry, v);
    if (i > 0 && r > pairs[i - 1].second + 1e-12) {
      const auto prev = pairs[i - 1].first;
      CHECK(v < c.values(static_cast<Eigen::Index>(prev.first), static_cast<Eigen::Index>(prev.second)));
    }
  }
  CHECK(max_entry == doctest::Approx(1.3));
}

TEST_CASE("coupling_matrix: chain closed form") {
  const std::size_t k = 9;
  const Lattice lat(k, 1, 0.4);
  const CouplingMatrix c = coupling_matrix(lat, 0.9);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l) {
      if (j == l) continue;
      const double d = std::abs(static_cast<double>(j) - static_cast<double>(l));
      CHECK(c.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) ==
            doctest::Approx(0.9 / (d * d * d)).epsilon(1e-14));
    }
}

TEST_CASE("pair distances are at least a, equal only for nearest neighbours") {
  const Lattice lat(4, 5, 0.6);
  for (const auto& [jl, r] : lattice_pairs(lat)) {
    CHECK(r >= 0.6 - 1e-12);
    const long dr = std::labs(static_cast<long>(lat.row(jl.first)) - static_cast<long>(lat.row(jl.second)));
    const long dc = std::labs(static_cast<long>(lat.col(jl.first)) - static_cast<long>(lat.col(jl.second)));
    CHECK((std::abs(r - 0.6) < 1e-12) == (dr + dc == 1));
  }
}

TEST_CASE("omega0_from_dipole") {
  CHECK(omega0_from_dipole(0.0, 0.5) == 0.0);
  const double w = omega0_from_dipole(0.02, 0.5);
  CHECK(w == doctest::Approx(0.02 * 0.02 * units::coulomb_mev_nm / 0.125));
  CHECK(omega0_from_dipole(0.04, 0.5) == doctest::Approx(4.0 * w));
  CHECK(omega0_from_dipole(0.02, 0.25) == doctest::Approx(8.0 * w));
  CHECK_THROWS_AS(omega0_from_dipole(0.02, 0.0), InvalidArgument);
  CHECK_THROWS_AS(omega0_from_dipole(0.02, -1.0), InvalidArgument);
}

TEST_CASE("dipole_dipole_energy: general orientation") {
  const double r = 0.5;
  // perpendicular to the separation: d^2 / r^3
  const double perp = dipole_dipole_energy({0, 0, 0.1}, {0, 0, 0.1}, {r, 0, 0});
  CHECK(perp == doctest::Approx(0.01 * units::coulomb_mev_nm / (r * r * r)));
  // head to tail along the separation: -2 d^2 / r^3
  const double inl = dipole_dipole_energy({0.1, 0, 0}, {0.1, 0, 0}, {r, 0, 0});
  CHECK(inl == doctest::Approx(-2.0 * perp));
  // orthogonal dipoles do not couple
  CHECK(dipole_dipole_energy({0.1, 0, 0}, {0, 0.1, 0}, {0, 0, r}) == doctest::Approx(0.0));
  // perpendicular lattice dipoles reproduce omega0 (a/r)^3
  const double d = 0.05;
  CHECK(dipole_dipole_energy({0, 0, d}, {0, 0, d}, {0.5, 0.5, 0}) ==
        doctest::Approx(omega0_from_dipole(d, 0.5) * std::pow(1.0 / std::sqrt(2.0), 3)));
}

TEST_CASE("lattice JSON") {
  nlohmann::json j;
  to_json(j, Lattice(2, 3, 0.5));
  CHECK(j["nx"] == 2);
  CHECK(j["ny"] == 3);
  CHECK(j["a_nm"] == 0.5);
  REQUIRE(j["positions"].size() == 6);
  CHECK(j["positions"][5][0] == 0.5);
  CHECK(j["positions"][5][1] == 1.0);
}
