#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "polarlattice/collective.hpp"
#include "polarlattice/errors.hpp"
#include "polarlattice/units.hpp"

namespace polarlattice {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class R2CPlan {
 public:
  R2CPlan(int ny, int nx) : ny_(ny), nx_(nx) {
    in_ = fftw_alloc_real(static_cast<std::size_t>(ny) * nx);
    out_ = fftw_alloc_complex(static_cast<std::size_t>(ny) * (nx / 2 + 1));
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_2d(ny, nx, in_, out_, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw NumericalError("FFTW could not create a plan");
  }
  ~R2CPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  R2CPlan(const R2CPlan&) = delete;
  R2CPlan& operator=(const R2CPlan&) = delete;

  double* in() { return in_; }
  const fftw_complex* out() const { return out_; }
  void run() { fftw_execute(plan_); }

 private:
  int ny_, nx_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace

std::vector<Wavevector> mode_wavevectors(const Eigen::MatrixXd& alpha, const Lattice& lat) {
  const int nx = static_cast<int>(lat.nx());
  const int ny = static_cast<int>(lat.ny());
  const int hx = nx / 2 + 1;
  if (static_cast<std::size_t>(alpha.cols()) != lat.size()) {
    throw InvalidArgument("mode_wavevectors: coefficient rows do not match the lattice");
  }
  const double a = lat.spacing();
  const double dkx = 2.0 * units::pi / (nx * a);
  const double dky = 2.0 * units::pi / (ny * a);

  R2CPlan plan(ny, nx);
  std::vector<Wavevector> out;
  out.reserve(static_cast<std::size_t>(alpha.rows()));
  for (Eigen::Index n = 0; n < alpha.rows(); ++n) {
    for (std::size_t j = 0; j < lat.size(); ++j) plan.in()[j] = alpha(n, static_cast<Eigen::Index>(j));
    plan.run();
    const fftw_complex* f = plan.out();

    double best = -1.0;
    Wavevector kbest;
    double peak = 0.0;
    for (int i = 0; i < ny * hx; ++i) peak = std::max(peak, f[i][0] * f[i][0] + f[i][1] * f[i][1]);
    const double tie = 1e-9 * peak;
    for (int ry = 0; ry < ny; ++ry) {
      for (int cx = 0; cx < hx; ++cx) {
        const fftw_complex& z = f[ry * hx + cx];
        const double p = z[0] * z[0] + z[1] * z[1];
        const Wavevector k{dkx * cx, dky * std::min(ry, ny - ry)};
        bool take = p > best + tie;
        if (!take && std::abs(p - best) <= tie) {
          const double kn = k.norm(), bn = kbest.norm();
          take = kn < bn - 1e-12 || (std::abs(kn - bn) <= 1e-12 && k.kx < kbest.kx);
        }
        if (take) {
          best = std::max(best, p);
          kbest = k;
        }
      }
    }
    out.push_back(kbest);
  }
  return out;
}

}  // namespace polarlattice
