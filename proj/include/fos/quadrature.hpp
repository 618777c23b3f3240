#pragma once

#include <functional>
#include <vector>

namespace fos {

// Adaptive Gauss-Kronrod integral of f over [a, b] to relative tolerance
// rel_tol.  Throws AccuracyError when the error estimate stays above
// 50 * rel_tol relative to the L1 mass of the integrand.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol);

// Prefix integrals of a nonnegative integrand at ascending break points:
// returns F with F[k] = integral of f over [0, ts[k]].  One incremental
// sweep, so a batch of evaluation points costs one pass over [0, ts.back()].
std::vector<double> prefix_integrals(const std::function<double(double)>& f,
                                     const std::vector<double>& ts, double rel_tol);

}  // namespace fos
