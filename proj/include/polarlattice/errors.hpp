#pragma once

#include <stdexcept>
#include <string>

namespace polarlattice {

/// Bad input: non-positive sizes, dimension mismatches, missing options.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The quadratic bosonic problem has no real normal-mode frequencies
/// (negative W^2, complex Hopfield eigenvalue, or a negative-norm mode).
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, long mode = -1)
      : std::runtime_error(what), mode_(mode) {}

  /// Zero-based index of the offending mode, or -1 when not attributable.
  long mode() const noexcept { return mode_; }

 private:
  long mode_;
};

/// Eigensolver or other numerical backend failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration file problem; `path` is the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace polarlattice
