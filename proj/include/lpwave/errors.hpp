#pragma once

#include <stdexcept>
#include <string>

namespace lpwave {

/// Invalid grid, cutoff or experiment setup (bad sizes, missing headroom).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different grids or have incompatible shapes.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain where an operation is defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient matrix fails the two-sided hyperbolicity bound.
class EllipticityError : public std::runtime_error {
 public:
  EllipticityError(const std::string& what, double t, double x0, double x1,
                   double xi0, double xi1)
      : std::runtime_error(what), t_(t), x_{x0, x1}, xi_{xi0, xi1} {}

  double t() const noexcept { return t_; }
  const double* x() const noexcept { return x_; }
  const double* xi() const noexcept { return xi_; }

 private:
  double t_;
  double x_[2];
  double xi_[2];
};

/// Field content or coefficient spectrum beyond the 2/3 dealiasing band.
class DealiasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time integration diverged; carries the last time with a finite state.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double last_valid_time)
      : std::runtime_error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// Experiment configuration rejected by validation; `path` names the field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace lpwave
