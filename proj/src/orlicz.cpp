#include "fos/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "fos/errors.hpp"

namespace fos {

namespace {

// Shared root-finder for both norms: the map lambda -> modular(u/lambda) is
// continuous and nonincreasing on (0, inf) for finite sums, so doubling and
// halving always produces a bracket around level 1.
RootResult level_set_infimum(const std::function<double(double)>& modular_at, double scale_hint) {
  RootResult res;
  double lambda = scale_hint > 0.0 ? scale_hint : 1.0;
  double m = modular_at(lambda);
  ++res.iterations;
  double lo, hi;
  if (m > 1.0) {
    do {
      lambda *= 2.0;
      m = modular_at(lambda);
      ++res.iterations;
    } while (m > 1.0);
    hi = lambda;
    lo = lambda / 2.0;
  } else {
    hi = lambda;
    do {
      lambda *= 0.5;
      m = modular_at(lambda);
      ++res.iterations;
    } while (m <= 1.0 && res.iterations < 2100);
    lo = lambda;
    hi = lambda * 2.0;
  }
  while (hi - lo > kNormRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    ++res.iterations;
    if (modular_at(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  res.value = 0.5 * (lo + hi);
  return res;
}

// Omega-restricted modular against an arbitrary Young function; the batched
// evaluation keeps quadrature-backed kinds (numeric conjugates) cheap.
double modular_impl(const NFunction& nf, const GridFunction& u, double lambda,
                    const ReductionMode& mode) {
  const GridDomain& gd = u.grid();
  const auto& nodes = gd.omega_nodes();
  const double cell = gd.cell_measure();

  if (nf.kind() == NFunction::Kind::NumericConjugate) {
    std::vector<double> ts(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) ts[k] = std::abs(u[nodes[k]]) / lambda;
    std::vector<std::size_t> order(ts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
    std::vector<double> sorted(ts.size());
    for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = ts[order[k]];
    const auto vals = nf.values_ascending(sorted);
    std::vector<double> by_node(ts.size());
    for (std::size_t k = 0; k < order.size(); ++k) by_node[order[k]] = vals[k];
    double acc = 0.0;  // node order, sequential
    for (std::size_t k = 0; k < by_node.size(); ++k) acc += by_node[k];
    return acc * cell;
  }

  return cell * blocked_sum(nodes.size(), mode, [&](std::size_t k0, std::size_t k1) {
           double acc = 0.0;
           for (std::size_t k = k0; k < k1; ++k) {
             const double t = std::abs(u[nodes[k]]);
             if (t > 0.0) acc += nf.value(t / lambda);
           }
           return acc;
         });
}

// Difference quotients |u_i-u_j| / d^s and pair weights for the pairs that
// can contribute; built once per function, reused across the lambda search.
struct DifferenceData {
  std::vector<double> q, w;

  DifferenceData(const KernelTable& kt, const GridFunction& u) {
    const std::size_t n = kt.pair_count();
    q.reserve(n / 2);
    w.reserve(n / 2);
    const GridDomain& gd = kt.grid();
    const int nodes = gd.node_count();
    std::size_t k = 0;
    for (int i = 0; i < nodes; ++i) {
      const double ui = u[i];
      for (int j = i + 1; j < nodes; ++j, ++k) {
        const double diff = std::abs(ui - u[j]);
        if (diff > 0.0) {
          q.push_back(diff * kt.inv_dist_pow_s_at(k));
          w.push_back(kt.weight_at(k));
        }
      }
    }
  }

  // ordered pairs count both directions: factor 2 over the packed i<j list
  double phi_at(const NFunction& nf, double lambda, const ReductionMode& mode) const {
    return 2.0 * blocked_sum(q.size(), mode, [&](std::size_t k0, std::size_t k1) {
             double acc = 0.0;
             for (std::size_t k = k0; k < k1; ++k) acc += nf.value(q[k] / lambda) * w[k];
             return acc;
           });
  }

  double max_quotient() const {
    double m = 0.0;
    for (const double v : q) m = std::max(m, v);
    return m;
  }
};

}  // namespace

double modular(const NFunction& nf, const GridFunction& u, const ReductionMode& mode) {
  return modular_impl(nf, u, 1.0, mode);
}

RootResult luxemburg_norm(const NFunction& nf, const GridFunction& u, const ReductionMode& mode) {
  if (u.max_abs() == 0.0) return {0.0, 0};
  return level_set_infimum(
      [&](double lambda) { return modular_impl(nf, u, lambda, mode); }, u.max_abs());
}

double gagliardo_modular(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                         const ReductionMode& mode) {
  DifferenceData data(kt, u);
  return data.phi_at(nf, 1.0, mode);
}

RootResult gagliardo_seminorm(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                              const ReductionMode& mode) {
  DifferenceData data(kt, u);
  if (data.q.empty()) return {0.0, 0};
  return level_set_infimum(
      [&](double lambda) { return data.phi_at(nf, lambda, mode); }, data.max_quotient());
}

HolderCheck holder_check(const NFunction& nf, const GridFunction& u, const GridFunction& v,
                         const ReductionMode& mode) {
  const GridDomain& gd = u.grid();
  const auto& nodes = gd.omega_nodes();
  const double inner =
      gd.cell_measure() * blocked_sum(nodes.size(), mode, [&](std::size_t k0, std::size_t k1) {
        double acc = 0.0;
        for (std::size_t k = k0; k < k1; ++k) acc += u[nodes[k]] * v[nodes[k]];
        return acc;
      });
  HolderCheck out;
  out.lhs = std::abs(inner);
  out.rhs = 2.0 * luxemburg_norm(nf, u, mode).value *
            luxemburg_norm(nf.conjugate(), v, mode).value;
  return out;
}

SandwichReport sandwich_check(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                              double rel_tol, const ReductionMode& mode) {
  SandwichReport rep;
  DifferenceData data(kt, u);
  if (data.q.empty()) throw std::invalid_argument("sandwich_check: zero function");
  rep.sigma = level_set_infimum(
                  [&](double lambda) { return data.phi_at(nf, lambda, mode); },
                  data.max_quotient())
                  .value;
  rep.phi = data.phi_at(nf, 1.0, mode);
  const double pl = nf.p_lower(), pu = nf.p_upper();
  if (std::abs(rep.sigma - 1.0) <= 1e-6) {
    rep.indeterminate = true;
    rep.lower = rep.upper = 1.0;
    rep.holds = true;
    return rep;
  }
  if (rep.sigma > 1.0) {
    rep.lower = std::pow(rep.sigma, pl);
    rep.upper = std::pow(rep.sigma, pu);
  } else {
    rep.lower = std::pow(rep.sigma, pu);
    rep.upper = std::pow(rep.sigma, pl);
  }
  rep.holds = rep.phi >= rep.lower * (1.0 - rel_tol) && rep.phi <= rep.upper * (1.0 + rel_tol);
  return rep;
}

PoincareCheck poincare_check(const NFunction& nf, const GridDomain& gd, const KernelTable& kt,
                             const GridFunction& u, const Ball& ball, const ReductionMode& mode) {
  if (ball.dim != gd.dim()) throw ConfigError("poincare: ball dimension mismatch");
  const Box& om = gd.omega_box();
  // closest approach of the ball center to the omega box
  double d2 = 0.0;
  for (int ax = 0; ax < gd.dim(); ++ax) {
    const auto a = static_cast<std::size_t>(ax);
    const double c = ball.center[a];
    const double gap = std::max({om.lo[a] - c, c - om.hi[a], 0.0});
    d2 += gap * gap;
  }
  if (std::sqrt(d2) < ball.radius) {
    throw ConfigError("poincare: ball must be disjoint from omega");
  }

  // diam(omega U ball): box diagonal, ball diameter, or box corner to the
  // far side of the ball
  double diam = std::max(om.diameter(), 2.0 * ball.radius);
  const int corners = gd.dim() == 1 ? 2 : 4;
  for (int c = 0; c < corners; ++c) {
    double p2 = 0.0;
    for (int ax = 0; ax < gd.dim(); ++ax) {
      const auto a = static_cast<std::size_t>(ax);
      const double corner = ((c >> ax) & 1) ? om.hi[a] : om.lo[a];
      p2 += (corner - ball.center[a]) * (corner - ball.center[a]);
    }
    diam = std::max(diam, std::sqrt(p2) + ball.radius);
  }

  PoincareCheck out;
  out.mu = std::pow(diam, gd.dim() + kt.s()) / ball.measure();
  out.lhs = luxemburg_norm(nf, u, mode).value;
  out.rhs = out.mu * gagliardo_seminorm(nf, kt, u, mode).value;
  return out;
}

NormReport norm_report(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                       const ReductionMode& mode) {
  NormReport r;
  const auto lux = luxemburg_norm(nf, u, mode);
  const auto semi = gagliardo_seminorm(nf, kt, u, mode);
  r.luxemburg = lux.value;
  r.gagliardo_seminorm = semi.value;
  r.full_norm = lux.value + semi.value;
  r.modular = modular(nf, u, mode);
  r.gagliardo_modular = gagliardo_modular(nf, kt, u, mode);
  r.bracket_iterations = lux.iterations + semi.iterations;
  return r;
}

namespace {
std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_norm_report_kv(std::ostream& os, const NormReport& r) {
  os << "luxemburg=" << num17(r.luxemburg) << "\n"
     << "gagliardo_seminorm=" << num17(r.gagliardo_seminorm) << "\n"
     << "full_norm=" << num17(r.full_norm) << "\n"
     << "modular=" << num17(r.modular) << "\n"
     << "gagliardo_modular=" << num17(r.gagliardo_modular) << "\n"
     << "bracket_iterations=" << r.bracket_iterations << "\n";
}

void write_norm_report_csv(std::ostream& os, const NormReport& r, bool with_header) {
  if (with_header) {
    os << "luxemburg,gagliardo_seminorm,full_norm,modular,gagliardo_modular,bracket_iterations\n";
  }
  os << num17(r.luxemburg) << "," << num17(r.gagliardo_seminorm) << "," << num17(r.full_norm)
     << "," << num17(r.modular) << "," << num17(r.gagliardo_modular) << ","
     << r.bracket_iterations << "\n";
}

}  // namespace fos
