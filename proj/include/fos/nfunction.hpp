#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fos {

inline constexpr double kDefaultQuadTol = 1e-10;   // relative, 1-D quadrature
inline constexpr double kInverseAbsTol = 1e-12;    // bisection for the density inverse

// A Young function A(t) = integral of a nondecreasing density a with a(0)=0,
// a(t)>0 for t>0 and a(t) -> inf.  Instances also expose the conjugate pair
// (Abar, abar) and the Simonenko growth indices
//
//   p_lower = inf_{t>0} t a(t)/A(t),   p_upper = sup_{t>0} t a(t)/A(t),
//
// which are required to satisfy 1 < p_lower <= p_upper < inf.  That range
// puts A in the doubling regime every norm computation here relies on.
//
// Built-in kinds:
//   Power(p)            A(t) = t^p
//   PowerNormalized(p)  A(t) = t^p / p
//   PowerLog(p)         A(t) = t^p log(1+t)
//   Tabulated           density sampled at knots, interpolated linearly and
//                       extended linearly past the last knot
//   NumericConjugate    the conjugate of another instance, evaluated through
//                       the generalized inverse of its density
//
// All methods are const and safe to call concurrently once constructed.
class NFunction {
 public:
  enum class Kind { Power, PowerNormalized, PowerLog, Tabulated, NumericConjugate };

  static NFunction power(double p);
  static NFunction power_normalized(double p);
  static NFunction power_log(double p);
  static NFunction tabulated(std::vector<double> knots, std::vector<double> density,
                             double quad_tol = kDefaultQuadTol);

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }  // built-in parameter p
  double quad_tol() const { return quad_tol_; }
  std::string name() const;

  double value(double t) const;              // A(t), t >= 0
  double density(double t) const;            // a(t)
  double conjugate_density(double t) const;  // abar(t) = sup{ s : a(s) <= t }
  double conjugate_value(double t) const;    // Abar(t)

  // A at a nondecreasing batch of points; one quadrature sweep for kinds
  // whose values are themselves integrals.
  std::vector<double> values_ascending(const std::vector<double>& ts) const;
  // Abar at a nondecreasing batch of points.
  std::vector<double> conjugate_values_ascending(const std::vector<double>& ts) const;

  // A(t) + Abar(s) - s t; nonnegative up to quadrature tolerance, zero at s = a(t).
  double young_residual(double s, double t) const;

  double p_lower() const { return p_lower_; }
  double p_upper() const { return p_upper_; }
  std::pair<double, double> simonenko_indices() const { return {p_lower_, p_upper_}; }
  // true when the indices come from a grid scan rather than a closed form
  bool indices_estimated() const { return indices_estimated_; }

  // sup A(2t)/A(t) over the index grid; finite and <= 2^p_upper
  double delta2_constant() const;
  // sup Abar(a(t))/A(t) over the index grid (the constant c in Abar(a(t)) <= c A(t))
  double conjugate_composition_ratio() const;

  // Conjugate as a full NFunction (numeric kind; power kinds still evaluate
  // their closed forms through it).
  NFunction conjugate() const;

  // Copy with forced indices.  Diagnostic hook: lets a verification run
  // demonstrate that a wrong index breaks the modular-norm bounds.
  NFunction with_indices(double p_lower, double p_upper) const;

 private:
  NFunction() = default;
  void finalize();  // shape validation + index setup

  struct Table;

  Kind kind_ = Kind::Power;
  double p_ = 0.0;
  double quad_tol_ = kDefaultQuadTol;
  double p_lower_ = 0.0, p_upper_ = 0.0;
  bool indices_estimated_ = false;
  std::shared_ptr<const Table> table_;     // Tabulated
  std::shared_ptr<const NFunction> base_;  // NumericConjugate
};

// Log-spaced grid shared by every index/sup scan.
std::vector<double> index_scan_grid();

}  // namespace fos
