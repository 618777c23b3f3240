#include "fos/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <stdexcept>

#include "fos/errors.hpp"

namespace fos {

namespace {
// Double-exponential rule: handles the algebraic endpoint behavior of
// generalized-inverse densities (abar(y) ~ y^{1/(p-1)} at 0) that defeats
// fixed-order Gauss panels.  One table per thread; construction is costly.
boost::math::quadrature::tanh_sinh<double>& integrator() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (!(b >= a)) throw std::invalid_argument("integrate: reversed interval");
  if (a == b) return 0.0;
  // rescale to the unit interval; the rule's error estimate degrades on
  // narrow intervals far from the origin
  const double width = b - a;
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double value = integrator().integrate(
      [&](double x) { return f(a + width * x) * width; }, 0.0, 1.0, rel_tol, &err, &l1, &levels);
  const double scale = std::max(l1, 1e-300);
  if (err > 50.0 * rel_tol * scale) {
    throw AccuracyError("integrate: requested tolerance not reached", err / scale);
  }
  return value;
}

std::vector<double> prefix_integrals(const std::function<double(double)>& f,
                                     const std::vector<double>& ts, double rel_tol) {
  std::vector<double> out(ts.size(), 0.0);
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    if (t < prev) throw std::invalid_argument("prefix_integrals: points not ascending");
    if (t > prev) {
      acc += integrate(f, prev, t, rel_tol);
      prev = t;
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace fos
