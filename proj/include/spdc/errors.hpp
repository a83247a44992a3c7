// Error types shared by all spdc modules.
#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures: the inputs are well formed but the physics or the
/// linear algebra has no finite answer.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Wavelength outside a material model's validity range.
class RangeError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Mode at or past grazing incidence inside the film.
class GeometryError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Etalon round-trip denominator 1 - r1 r2 exp(2i phi) vanishes.
class ResonancePoleError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// (I - rho w) is too ill-conditioned to solve (parametric oscillation).
class SingularSystemError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Requested signal wavelength cannot satisfy energy conservation.
class EnergyConservationError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Statistic with no defined value (e.g. R^2 against a constant reference).
class UndefinedStatisticError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Invalid or incomplete run configuration. The message names the key path.
class ConfigError : public Error {
public:
  ConfigError(const std::string& key_path, const std::string& what)
      : Error(key_path.empty() ? what : key_path + ": " + what), key_path_(key_path) {}

  const std::string& key_path() const noexcept { return key_path_; }

private:
  std::string key_path_;
};

}  // namespace spdc
