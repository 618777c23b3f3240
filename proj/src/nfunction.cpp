#include "fos/nfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fos/errors.hpp"
#include "fos/quadrature.hpp"

namespace fos {

namespace {

constexpr double kScanMin = 1e-8;
constexpr double kScanMax = 1e8;
constexpr int kScanPoints = 2000;

void require_nonneg(double t, const char* who) {
  if (!(t >= 0.0)) throw std::domain_error(std::string(who) + ": negative argument");
}

// sup{ s : f(s) <= y } for nondecreasing f with f(0)=0, f -> inf.
// Bracket-doubling then bisection.  The stop width is kInverseAbsTol,
// tightened proportionally for roots below 1 (quadratures of the inverse
// need uniform relative accuracy) and floored at the machine resolution of
// the bracket.
double generalized_inverse(const std::function<double(double)>& f, double y) {
  if (y <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (f(hi) <= y) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 4100) {
      throw AccuracyError("generalized_inverse: density does not reach level", hi);
    }
  }
  auto width_target = [&] {
    const double abs_tol = std::min(kInverseAbsTol, kInverseAbsTol * lo);
    const double machine = 4.0 * std::numeric_limits<double>::epsilon() * hi;
    return std::max({abs_tol, machine, 1e-300});
  };
  while (hi - lo > width_target()) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

// Piecewise-linear density with exact prefix integrals at the knots.
struct NFunction::Table {
  std::vector<double> t, a, prefix;

  double density(double x) const {
    if (x <= t.front()) return a.front() * (t.front() > 0.0 ? x / t.front() : 0.0);
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    if (it == t.end()) {
      // linear extension with the last segment's slope
      const std::size_t n = t.size();
      const double slope = (a[n - 1] - a[n - 2]) / (t[n - 1] - t[n - 2]);
      return a[n - 1] + slope * (x - t[n - 1]);
    }
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[k - 1]) / (t[k] - t[k - 1]);
    return a[k - 1] + w * (a[k] - a[k - 1]);
  }

  double integral(double x) const {
    // trapezoid is exact on a piecewise-linear density
    if (x <= t.front()) {
      return 0.5 * density(x) * x;
    }
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t k = (it == t.end()) ? t.size() - 1 : static_cast<std::size_t>(it - t.begin()) - 1;
    return prefix[k] + 0.5 * (a[k] + density(x)) * (x - t[k]);
  }
};

NFunction NFunction::power(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("NFunction::power: need p > 1");
  NFunction nf;
  nf.kind_ = Kind::Power;
  nf.p_ = p;
  nf.p_lower_ = nf.p_upper_ = p;
  nf.finalize();
  return nf;
}

NFunction NFunction::power_normalized(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("NFunction::power_normalized: need p > 1");
  NFunction nf;
  nf.kind_ = Kind::PowerNormalized;
  nf.p_ = p;
  nf.p_lower_ = nf.p_upper_ = p;
  nf.finalize();
  return nf;
}

NFunction NFunction::power_log(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("NFunction::power_log: need p > 1");
  NFunction nf;
  nf.kind_ = Kind::PowerLog;
  nf.p_ = p;
  // t a(t)/A(t) = p + t/((1+t) log(1+t)) falls from p+1 at 0+ to p at infinity
  nf.p_lower_ = p;
  nf.p_upper_ = p + 1.0;
  nf.finalize();
  return nf;
}

NFunction NFunction::tabulated(std::vector<double> knots, std::vector<double> density,
                               double quad_tol) {
  if (knots.size() != density.size() || knots.size() < 2) {
    throw std::invalid_argument("NFunction::tabulated: need matching knot/density arrays");
  }
  if (knots.front() != 0.0 || density.front() != 0.0) {
    // a(0) = 0 is part of being a density; prepend the origin if absent
    if (knots.front() > 0.0) {
      knots.insert(knots.begin(), 0.0);
      density.insert(density.begin(), 0.0);
    } else {
      throw std::invalid_argument("NFunction::tabulated: first knot must be t=0, a=0");
    }
  }
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k] > knots[k - 1])) {
      throw std::invalid_argument("NFunction::tabulated: knots must increase");
    }
    if (density[k] < density[k - 1]) {
      throw std::invalid_argument("NFunction::tabulated: density must be nondecreasing");
    }
  }
  const std::size_t n = knots.size();
  if (!(density[n - 1] > density[n - 2])) {
    throw std::invalid_argument(
        "NFunction::tabulated: last segment must increase (density has to grow without bound)");
  }

  auto table = std::make_shared<Table>();
  table->t = std::move(knots);
  table->a = std::move(density);
  table->prefix.resize(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    table->prefix[k] = table->prefix[k - 1] +
                       0.5 * (table->a[k] + table->a[k - 1]) * (table->t[k] - table->t[k - 1]);
  }

  NFunction nf;
  nf.kind_ = Kind::Tabulated;
  nf.quad_tol_ = quad_tol;
  nf.table_ = std::move(table);
  nf.finalize();
  return nf;
}

std::string NFunction::name() const {
  char buf[64];
  switch (kind_) {
    case Kind::Power:
      std::snprintf(buf, sizeof buf, "power(%g)", p_);
      return buf;
    case Kind::PowerNormalized:
      std::snprintf(buf, sizeof buf, "power_normalized(%g)", p_);
      return buf;
    case Kind::PowerLog:
      std::snprintf(buf, sizeof buf, "power_log(%g)", p_);
      return buf;
    case Kind::Tabulated:
      return "tabulated";
    case Kind::NumericConjugate:
      return "conjugate(" + base_->name() + ")";
  }
  return "?";
}

double NFunction::value(double t) const {
  require_nonneg(t, "NFunction::value");
  switch (kind_) {
    case Kind::Power:
      return std::pow(t, p_);
    case Kind::PowerNormalized:
      return std::pow(t, p_) / p_;
    case Kind::PowerLog:
      return std::pow(t, p_) * std::log1p(t);
    case Kind::Tabulated:
      return table_->integral(t);
    case Kind::NumericConjugate:
      return base_->conjugate_value(t);
  }
  return 0.0;
}

double NFunction::density(double t) const {
  require_nonneg(t, "NFunction::density");
  switch (kind_) {
    case Kind::Power:
      return p_ * std::pow(t, p_ - 1.0);
    case Kind::PowerNormalized:
      return std::pow(t, p_ - 1.0);
    case Kind::PowerLog:
      return t == 0.0 ? 0.0
                      : p_ * std::pow(t, p_ - 1.0) * std::log1p(t) + std::pow(t, p_) / (1.0 + t);
    case Kind::Tabulated:
      return table_->density(t);
    case Kind::NumericConjugate:
      return base_->conjugate_density(t);
  }
  return 0.0;
}

double NFunction::conjugate_density(double t) const {
  require_nonneg(t, "NFunction::conjugate_density");
  switch (kind_) {
    case Kind::Power:
      return std::pow(t / p_, 1.0 / (p_ - 1.0));
    case Kind::PowerNormalized:
      return std::pow(t, 1.0 / (p_ - 1.0));
    default:
      return generalized_inverse([this](double s) { return density(s); }, t);
  }
}

double NFunction::conjugate_value(double t) const {
  require_nonneg(t, "NFunction::conjugate_value");
  switch (kind_) {
    case Kind::Power: {
      // conjugate exponent pc = p/(p-1); Abar(t) = (p-1)/p * p^{-1/(p-1)} * t^pc
      const double pc = p_ / (p_ - 1.0);
      return (p_ - 1.0) / p_ * std::pow(p_, -1.0 / (p_ - 1.0)) * std::pow(t, pc);
    }
    case Kind::PowerNormalized: {
      const double pc = p_ / (p_ - 1.0);
      return std::pow(t, pc) / pc;
    }
    default:
      if (t == 0.0) return 0.0;
      return integrate([this](double s) { return conjugate_density(s); }, 0.0, t, quad_tol_);
  }
}

std::vector<double> NFunction::values_ascending(const std::vector<double>& ts) const {
  if (kind_ == Kind::NumericConjugate) return base_->conjugate_values_ascending(ts);
  std::vector<double> out(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) out[k] = value(ts[k]);
  return out;
}

std::vector<double> NFunction::conjugate_values_ascending(const std::vector<double>& ts) const {
  if (kind_ == Kind::Power || kind_ == Kind::PowerNormalized) {
    std::vector<double> out(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) out[k] = conjugate_value(ts[k]);
    return out;
  }
  return prefix_integrals([this](double s) { return conjugate_density(s); }, ts, quad_tol_);
}

double NFunction::young_residual(double s, double t) const {
  require_nonneg(s, "NFunction::young_residual");
  require_nonneg(t, "NFunction::young_residual");
  return value(t) + conjugate_value(s) - s * t;
}

double NFunction::delta2_constant() const {
  const auto grid = index_scan_grid();
  std::vector<double> doubled(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) doubled[k] = 2.0 * grid[k];
  const auto at = values_ascending(grid);
  const auto at2 = values_ascending(doubled);
  double sup = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (at[k] > 0.0) sup = std::max(sup, at2[k] / at[k]);
  }
  return sup;
}

double NFunction::conjugate_composition_ratio() const {
  const auto grid = index_scan_grid();
  std::vector<double> dens(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) dens[k] = density(grid[k]);
  const auto conj = conjugate_values_ascending(dens);
  const auto vals = values_ascending(grid);
  double sup = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (vals[k] > 0.0) sup = std::max(sup, conj[k] / vals[k]);
  }
  return sup;
}

NFunction NFunction::conjugate() const {
  NFunction nf;
  nf.kind_ = Kind::NumericConjugate;
  nf.quad_tol_ = quad_tol_;
  nf.base_ = std::make_shared<NFunction>(*this);
  if (!indices_estimated_) {
    // indices of the conjugate pair are Hoelder-dual to ours
    nf.p_lower_ = p_upper_ / (p_upper_ - 1.0);
    nf.p_upper_ = p_lower_ / (p_lower_ - 1.0);
  }
  nf.finalize();
  return nf;
}

NFunction NFunction::with_indices(double p_lower, double p_upper) const {
  if (!(1.0 < p_lower && p_lower <= p_upper && std::isfinite(p_upper))) {
    throw std::invalid_argument("NFunction::with_indices: need 1 < p_lower <= p_upper < inf");
  }
  NFunction nf = *this;
  nf.p_lower_ = p_lower;
  nf.p_upper_ = p_upper;
  nf.indices_estimated_ = true;
  return nf;
}

void NFunction::finalize() {
  if (kind_ == Kind::Tabulated || (kind_ == Kind::NumericConjugate && p_lower_ == 0.0)) {
    // grid estimate of inf/sup of t a(t)/A(t)
    const auto grid = index_scan_grid();
    const auto vals = values_ascending(grid);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      const double at = vals[k];
      if (!(at > 0.0)) {
        throw std::invalid_argument("NFunction: A(t) = 0 at sampled t > 0; not an N-function");
      }
      const double ratio = t * density(t) / at;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    p_lower_ = lo;
    p_upper_ = hi;
    indices_estimated_ = true;
  }

  if (!(1.0 < p_lower_ && p_lower_ <= p_upper_ && std::isfinite(p_upper_))) {
    throw std::invalid_argument("NFunction: growth indices violate 1 < p_lower <= p_upper < inf");
  }

  // spot checks of the N-function shape on a small sample
  const double probes[] = {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3};
  double prev_t = 0.0, prev_a = density(0.0);
  if (prev_a != 0.0) throw std::invalid_argument("NFunction: a(0) != 0");
  for (const double t : probes) {
    const double at = density(t);
    if (at + 1e-300 < prev_a) throw std::invalid_argument("NFunction: density decreases");
    if (!(value(t) > 0.0)) throw std::invalid_argument("NFunction: A(t) <= 0 at t > 0");
    // midpoint convexity against the previous probe
    const double tm = 0.5 * (prev_t + t);
    if (value(tm) > 0.5 * (value(prev_t) + value(t)) * (1.0 + 1e-12) + 1e-300) {
      throw std::invalid_argument("NFunction: convexity violated");
    }
    prev_t = t;
    prev_a = at;
  }
}

std::vector<double> index_scan_grid() {
  std::vector<double> grid(kScanPoints);
  const double lmin = std::log(kScanMin), lmax = std::log(kScanMax);
  for (int k = 0; k < kScanPoints; ++k) {
    grid[static_cast<std::size_t>(k)] =
        std::exp(lmin + (lmax - lmin) * static_cast<double>(k) / (kScanPoints - 1));
  }
  return grid;
}

}  // namespace fos
