#pragma once

#include <stdexcept>
#include <string>

namespace fos {

// Bad problem description (grid geometry, option values, config files).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent data files (CSV input, node-order mismatch).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Problem outside the coercive regime the minimizer is guaranteed for.
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature failed to reach the requested tolerance; carries what it got.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_tol)
      : std::runtime_error(what), achieved_tol_(achieved_tol) {}
  double achieved_tol() const { return achieved_tol_; }

 private:
  double achieved_tol_;
};

}  // namespace fos
