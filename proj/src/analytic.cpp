#include "polarlattice/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "polarlattice/errors.hpp"
#include "polarlattice/units.hpp"

namespace polarlattice {

namespace {

void check(const DispersionParams& p) {
  if (p.cutoff < 1) throw InvalidArgument("dispersion cutoff must be >= 1");
  if (!(p.omega_mol > 0.0)) throw InvalidArgument("omega_mol must be positive");
  if (!(p.a > 0.0)) throw InvalidArgument("lattice constant must be positive");
}

}  // namespace

double lattice_sum_s3(int cutoff) {
  if (cutoff < 1) throw InvalidArgument("lattice sum cutoff must be >= 1");
  // Octant sum: axis and diagonal terms appear 4 times, the rest 8 times.
  double axis = 0.0, diag = 0.0, rest = 0.0;
  for (int m = 1; m <= cutoff; ++m) {
    const double dm = m;
    axis += 1.0 / (dm * dm * dm);
    diag += 1.0 / (2.0 * std::sqrt(2.0) * dm * dm * dm);
    for (int n = m + 1; n <= cutoff; ++n) {
      const double r2 = dm * dm + static_cast<double>(n) * n;
      rest += 1.0 / (r2 * std::sqrt(r2));
    }
  }
  return 4.0 * axis + 4.0 * diag + 8.0 * rest;
}

double lattice_sum_cos(Wavevector k, double a, int cutoff) {
  if (cutoff < 1) throw InvalidArgument("lattice sum cutoff must be >= 1");
  // The sine parts cancel between +m and -m, so cos(kx m a + ky n a) can be
  // replaced by cos(kx m a) cos(ky n a).
  std::vector<double> cx(static_cast<std::size_t>(cutoff) + 1), cy(cx.size());
  for (int m = 0; m <= cutoff; ++m) {
    cx[m] = std::cos(k.kx * a * m);
    cy[m] = std::cos(k.ky * a * m);
  }
  double s = 0.0;
  for (int m = 0; m <= cutoff; ++m) {
    const double wm = m == 0 ? 1.0 : 2.0;
    for (int n = 0; n <= cutoff; ++n) {
      if (m == 0 && n == 0) continue;
      const double wn = n == 0 ? 1.0 : 2.0;
      const double r2 = static_cast<double>(m) * m + static_cast<double>(n) * n;
      s += wm * wn * cx[m] * cy[n] / (r2 * std::sqrt(r2));
    }
  }
  return s;
}

int converged_cutoff(const DispersionParams& p, double tol, int start, int max_cutoff) {
  check(p);
  auto band_top = [&](int c) {
    return std::sqrt(p.omega_mol * p.omega_mol +
                     2.0 * p.omega_mol * p.omega0 * lattice_sum_s3(c));
  };
  int c = std::max(1, start);
  double prev = band_top(c);
  while (c < max_cutoff) {
    c *= 2;
    const double next = band_top(c);
    if (std::abs(next - prev) < tol) return c;
    prev = next;
  }
  throw NumericalError("lattice sum not converged to " + std::to_string(tol) +
                       " meV by cutoff " + std::to_string(max_cutoff));
}

double dispersion_rwa(Wavevector k, const DispersionParams& p) {
  check(p);
  return p.omega_mol + p.omega0 * lattice_sum_cos(k, p.a, p.cutoff);
}

double dispersion_rwa_chain(double k, const DispersionParams& p) {
  check(p);
  return p.omega_mol + 2.0 * p.omega0 * std::cos(k * p.a);
}

double dispersion_full(Wavevector k, const DispersionParams& p) {
  check(p);
  const double rad =
      p.omega_mol * p.omega_mol + 2.0 * p.omega_mol * p.omega0 * lattice_sum_cos(k, p.a, p.cutoff);
  if (rad < 0.0) {
    throw InstabilityError("dispersion radicand is negative (" + std::to_string(rad) +
                           ") at k = (" + std::to_string(k.kx) + ", " + std::to_string(k.ky) + ")");
  }
  return std::sqrt(rad);
}

double dispersion_linear(double kmag, const DispersionParams& p, LinearForm form) {
  check(p);
  const double w0 =
      std::sqrt(p.omega_mol * p.omega_mol + 2.0 * p.omega_mol * p.omega0 * lattice_sum_s3(p.cutoff));
  double slope = 2.0 * units::pi * p.omega0 * p.a;
  if (form == LinearForm::appendix) slope *= p.omega_mol / w0;
  return w0 - slope * kmag;
}

CriterionResult interaction_criterion(double omega0, double a, double sigma_L, double gamma) {
  if (!(omega0 >= 0.0) || !(a > 0.0) || !(sigma_L > 0.0) || !(gamma > 0.0)) {
    throw InvalidArgument("interaction_criterion: omega0 >= 0, a, sigma_L, gamma > 0 required");
  }
  CriterionResult r;
  r.threshold_gamma = std::isinf(sigma_L) ? 0.0 : 2.0 * units::pi * omega0 * a / sigma_L;
  r.holds = r.threshold_gamma >= gamma;
  return r;
}

}  // namespace polarlattice
