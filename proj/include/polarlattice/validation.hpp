#pragma once

#include <functional>
#include <string>
#include <vector>

namespace polarlattice {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  /// Perturbs one coupling entry so the symmetry check must fail.
  bool inject_fault = false;
};

/// Built-in oracle suite on small lattices (up to 4 x 4): brute-force
/// Hopfield solves against the fast paths, sum rules, material regressions.
std::vector<CheckResult> run_validation(
    const ValidationOptions& options = {},
    const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace polarlattice
