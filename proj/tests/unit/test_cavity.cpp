#include <cmath>

#include "doctest.h"
#include "polarlattice/cavity.hpp"
#include "polarlattice/errors.hpp"
#include "support.hpp"

using namespace polarlattice;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd mode_norms(const PolaritonModes& p) {
  return p.zeta1.array().square() - p.eta1.array().square() +
         (p.zeta2.array().square() - p.eta2.array().square()).rowwise().sum();
}

}  // namespace

TEST_CASE("gaussian_coupling: homogeneous field on the 51x51 patch") {
  const Lattice lat(51, 51, 0.5);
  const CavityMode cav = gaussian_coupling(lat, 108.2, homogeneous_field, {std::nullopt, 2.0});
  CHECK(cav.homogeneous());
  CHECK(cav.g.size() == 2601);
  CHECK(cav.g.minCoeff() == cav.g.maxCoeff());
  CHECK(cav.g(0) == doctest::Approx(2.0 / 51.0));
  CHECK(std::abs(cav.g(0) - 0.04) < 0.001);
  CHECK(cav.g0 == doctest::Approx(2.0 / 51.0));
}

TEST_CASE("gaussian_coupling: profile values") {
  const Lattice lat(5, 5, 1.0);
  const CavityMode cav = gaussian_coupling(lat, 100.0, 1.5, {0.3, std::nullopt});
  CHECK(cav.center.x == 2.0);
  CHECK(cav.center.y == 2.0);
  CHECK(cav.g(static_cast<Index>(lat.index(2, 2))) == doctest::Approx(0.3));
  // molecule at distance sigma from a shifted centre
  const CavityMode off = gaussian_coupling(lat, 100.0, 1.5, {0.3, std::nullopt}, Point{0.5, 2.0});
  CHECK(off.g(static_cast<Index>(lat.index(2, 2))) == doctest::Approx(0.3 * std::exp(-0.5)));
  CHECK(off.g(static_cast<Index>(lat.index(0, 0))) ==
        doctest::Approx(0.3 * std::exp(-(0.25 + 4.0) / (2 * 2.25))));
  CHECK(cav.g_tot == doctest::Approx(cav.g.norm()).epsilon(1e-12));
}

TEST_CASE("gaussian_coupling: g_tot normalisation") {
  for (int trial = 0; trial < 20; ++trial) {
    const Lattice lat(static_cast<std::size_t>(testing::uniform_int(1, 9)),
                      static_cast<std::size_t>(testing::uniform_int(1, 9)), 0.5);
    const double sigma = testing::uniform(0.3, 5.0);
    const double gt = testing::uniform(0.1, 5.0);
    const CavityMode cav = gaussian_coupling(lat, 100.0, sigma, {std::nullopt, gt});
    CHECK(std::abs(cav.g.squaredNorm() - gt * gt) <= 1e-10 * gt * gt);
    CHECK(cav.g_tot == gt);
    CHECK(cav.g.maxCoeff() <= cav.g0 * (1 + 1e-12));
  }
}

TEST_CASE("gaussian_coupling: invalid input") {
  const Lattice lat(3, 3, 0.5);
  CHECK_THROWS_AS(gaussian_coupling(lat, 100.0, 1.0, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(gaussian_coupling(lat, 100.0, 1.0, {std::nullopt, std::nullopt}), InvalidArgument);
  CHECK_THROWS_AS(gaussian_coupling(lat, 100.0, 0.0, {1.0, std::nullopt}), InvalidArgument);
  CHECK_THROWS_AS(gaussian_coupling(lat, 100.0, -2.0, {1.0, std::nullopt}), InvalidArgument);
}

TEST_CASE("collective_couplings") {
  const Lattice lat(6, 6, 0.5);
  const CollectiveModes m = reduced_symmetric_solve(100.0, coupling_matrix(lat, 1.0), lat);
  const CavityMode hom = gaussian_coupling(lat, 100.0, homogeneous_field, {std::nullopt, 2.0});
  const VectorXd G = collective_couplings(hom, m);
  CHECK((G - hom.g(0) * m.D).cwiseAbs().maxCoeff() < 1e-12);
  // the bright mode dominates
  Index arg = 0;
  G.cwiseAbs().maxCoeff(&arg);
  CHECK(arg == 0);
  for (Index n = 1; n < G.size(); ++n) CHECK(std::abs(G(n)) < 0.5 * std::abs(G(0)));

  const CavityMode zero = gaussian_coupling(lat, 100.0, 1.0, {0.0, std::nullopt});
  CHECK(collective_couplings(zero, m).cwiseAbs().maxCoeff() == 0.0);

  // linear in the profile
  const CavityMode gauss = gaussian_coupling(lat, 100.0, 1.0, {0.7, std::nullopt});
  CavityMode scaled = gauss;
  scaled.g *= 3.0;
  CHECK((collective_couplings(scaled, m) - 3.0 * collective_couplings(gauss, m)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two_mode_energies") {
  auto [p, q] = two_mode_energies(100.0, 100.0, 2.0);
  CHECK(p == doctest::Approx(std::sqrt(10400.0)).epsilon(1e-14));
  CHECK(q == doctest::Approx(std::sqrt(9600.0)).epsilon(1e-14));
  CHECK(p == doctest::Approx(101.9804).epsilon(1e-6));
  CHECK(q == doctest::Approx(97.9796).epsilon(1e-6));

  std::tie(p, q) = two_mode_energies(95.0, 108.0, 0.0);
  CHECK(p == 108.0);
  CHECK(q == 95.0);

  // near resonance with weak coupling the pair sits at w +- g
  std::tie(p, q) = two_mode_energies(100.0, 100.0, 0.01);
  CHECK(p - 100.0 == doctest::Approx(0.01).epsilon(1e-4));
  CHECK(100.0 - q == doctest::Approx(0.01).epsilon(1e-4));

  CHECK_THROWS_AS(two_mode_energies(100.0, 100.0, 60.0), InstabilityError);
  CHECK_THROWS_AS(two_mode_energies(0.0, 100.0, 1.0), InvalidArgument);
}

TEST_CASE("polariton_matrix: layout and decoupled spectrum") {
  VectorXd W(3), G(3);
  W << 105.0, 100.0, 98.0;
  G << 0.0, 0.0, 0.0;
  const HopfieldMatrix h = polariton_matrix(102.0, W, G);
  REQUIRE(h.dim() == 8);
  CHECK(h(0, 0) == 102.0);
  CHECK(h(1, 1) == -102.0);
  CHECK(h(4, 4) == 100.0);
  const auto ev = testing::positive_eigenvalues(h.entries());
  CHECK(testing::max_rel_diff(ev, {105.0, 102.0, 100.0, 98.0}) < 1e-14);

  G << 0.5, -0.3, 0.2;
  const HopfieldMatrix g = polariton_matrix(102.0, W, G);
  Eigen::VectorXd w4(4);
  w4 << 102.0, 105.0, 100.0, 98.0;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  for (Index n = 0; n < 3; ++n) c(0, n + 1) = c(n + 1, 0) = G(n);
  CHECK((g.entries() - testing::hopfield_by_hand(w4, c)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(polariton_matrix(102.0, W, VectorXd::Zero(2)), InvalidArgument);
}

TEST_CASE("single bright mode reproduces the two-mode formula") {
  for (double wc : {95.0, 100.0, 108.0}) {
    VectorXd W(4), G = VectorXd::Zero(4);
    W << 104.0, 101.0, 99.0, 97.0;
    G(0) = 2.5;
    const HopfieldMatrix h = polariton_matrix(wc, W, G);
    const auto [p, q] = two_mode_energies(wc, W(0), G(0));
    for (const PolaritonModes& pm : {diagonalize_polaritons(h), diagonalize_polaritons_dense(h)}) {
      std::vector<double> got(pm.Wm.data(), pm.Wm.data() + pm.Wm.size());
      std::vector<double> expect{p, 101.0, 99.0, 97.0, q};
      std::sort(expect.rbegin(), expect.rend());
      CHECK(testing::max_rel_diff(got, expect) < 1e-10);
    }
  }
}

TEST_CASE("single molecule: characteristic polynomial") {
  // (x - wc^2)(x - w^2) = 4 g^2 wc w  with x = W^2
  const double wc = 100.0, w = 100.0, g = 3.0;
  VectorXd W(1), G(1);
  W << w;
  G << g;
  const PolaritonModes pm = diagonalize_polaritons(polariton_matrix(wc, W, G));
  for (Index m = 0; m < 2; ++m) {
    const double x = pm.Wm(m) * pm.Wm(m);
    CHECK((x - wc * wc) * (x - w * w) == doctest::Approx(4 * g * g * wc * w).epsilon(1e-9));
  }
}

TEST_CASE("diagonalize_polaritons: photon fractions") {
  VectorXd W(3), G = VectorXd::Zero(3);
  W << 105.0, 100.0, 98.0;
  PolaritonModes pm = diagonalize_polaritons(polariton_matrix(102.0, W, G));
  // cavity is the second highest mode
  CHECK(pm.Wm(1) == 102.0);
  CHECK(pm.photon_fraction(1) == doctest::Approx(1.0));
  CHECK(pm.photon_fraction(0) == 0.0);
  CHECK(pm.dark[0]);
  CHECK(!pm.dark[1]);

  // resonant, coupled to a single mode: an even split
  G(1) = 1.0;
  pm = diagonalize_polaritons(polariton_matrix(100.0, W, G));
  int halves = 0;
  for (Index m = 0; m < pm.Wm.size(); ++m)
    if (std::abs(pm.photon_fraction(m) - 0.5) < 0.01) ++halves;
  CHECK(halves == 2);
  CHECK(pm.photon_fraction.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((mode_norms(pm).array() - 1.0).abs().maxCoeff() < 1e-8);
}

TEST_CASE("instability in the polariton problem") {
  VectorXd W(1), G(1);
  W << 10.0;
  G << 20.0;
  CHECK_THROWS_AS(diagonalize_polaritons(polariton_matrix(10.0, W, G)), InstabilityError);
  CHECK_THROWS_AS(diagonalize_polaritons_dense(polariton_matrix(10.0, W, G)), InstabilityError);
}

TEST_CASE("solve_polaritons agrees with the brute-force route") {
  const Lattice lat(4, 4, 0.5);
  const CollectiveModes m = reduced_symmetric_solve(100.0, coupling_matrix(lat, 1.0), lat);
  for (double sigma : {homogeneous_field, 1.25, 0.5}) {
    const CavityMode cav = gaussian_coupling(lat, m.W(0), sigma, {std::nullopt, 2.0});
    const PolaritonModes fast = solve_polaritons(cav, m);
    const PolaritonModes ref = diagonalize_polaritons_dense(polariton_matrix(cav, m));
    const auto brute = testing::positive_eigenvalues(polariton_matrix(cav, m).entries());
    std::vector<double> got(fast.Wm.data(), fast.Wm.data() + fast.Wm.size());
    CHECK(testing::max_rel_diff(got, brute) < 1e-10);
    CHECK(fast.photon_fraction.sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((mode_norms(fast).array() - 1.0).abs().maxCoeff() < 1e-8);
    // photon fractions per degenerate cluster
    for (const auto& cl : degenerate_clusters(fast.Wm, 1e-9)) {
      double a = 0.0, b = 0.0;
      for (auto i : cl) {
        a += fast.photon_fraction(static_cast<Index>(i));
        b += ref.photon_fraction(static_cast<Index>(i));
      }
      CHECK(a == doctest::Approx(b).epsilon(1e-8));
    }
  }
}

TEST_CASE("homogeneous field without dipole coupling: two bright modes and N - 1 dark ones") {
  const Lattice lat(4, 3, 0.5);
  const CollectiveModes m = reduced_symmetric_solve(100.0, coupling_matrix(lat, 0.0), lat);
  const CavityMode cav = gaussian_coupling(lat, 100.0, homogeneous_field, {std::nullopt, 2.0});
  const PolaritonModes pm = solve_polaritons(cav, m);
  const auto [p, q] = two_mode_energies(100.0, 100.0, 2.0);
  REQUIRE(pm.size() == 13);
  CHECK(pm.Wm(0) == doctest::Approx(p).epsilon(1e-12));
  CHECK(pm.Wm(12) == doctest::Approx(q).epsilon(1e-12));
  for (Index i = 1; i < 12; ++i) {
    CHECK(pm.Wm(i) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(pm.dark[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("avoided crossing is centred on W1") {
  const Lattice lat(3, 3, 0.5);
  const CollectiveModes m = reduced_symmetric_solve(100.0, coupling_matrix(lat, 1.0), lat);
  const double step = 0.05;
  double best = 1e9, best_wc = 0.0;
  for (double wc = m.W(0) - 3.0; wc <= m.W(0) + 3.0; wc += step) {
    const CavityMode cav = gaussian_coupling(lat, wc, homogeneous_field, {std::nullopt, 0.2});
    const PolaritonModes pm = solve_polaritons(cav, m);
    // the two modes with the largest photon fraction
    Index a = 0, b = 0;
    VectorXd f = pm.photon_fraction;
    f.maxCoeff(&a);
    f(a) = -1;
    f.maxCoeff(&b);
    const double gap = std::abs(pm.Wm(a) - pm.Wm(b));
    if (gap < best) {
      best = gap;
      best_wc = wc;
    }
  }
  CHECK(std::abs(best_wc - m.W(0)) <= step);
}

TEST_CASE("diamagnetic shift") {
  const Lattice lat(3, 3, 0.5);
  const CavityMode cav = gaussian_coupling(lat, 100.0, 1.0, {std::nullopt, 2.0});
  const std::vector<double> w(9, 100.0);
  CHECK(diamagnetic_cavity_frequency(cav, w) == doctest::Approx(100.0 + 2.0 * 4.0 / 100.0));
  const CollectiveModes m = reduced_symmetric_solve(100.0, coupling_matrix(lat, 1.0), lat);
  CavityMode shifted = cav;
  shifted.omega_cav = diamagnetic_cavity_frequency(cav, w);
  const PolaritonModes a = solve_polaritons(cav, m, {true});
  const PolaritonModes b = solve_polaritons(shifted, m);
  CHECK((a.Wm - b.Wm).cwiseAbs().maxCoeff() < 1e-12);
}
