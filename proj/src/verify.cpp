#include "fos/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fos/errors.hpp"
#include "fos/orlicz.hpp"
#include "fos/rng.hpp"

namespace fos {

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    g[static_cast<std::size_t>(k)] =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1));
  }
  return g;
}

CheckLine upper_bounded(const std::string& name, double worst, double bound,
                        const std::string& note = "") {
  CheckLine line{name, worst, bound, bound - worst, worst <= bound, note};
  return line;
}

}  // namespace

std::vector<CheckLine> run_verification(const RunConfig& cfg) {
  if (!cfg.ball) {
    throw ConfigError("verify: the poincare check needs ball_center and ball_radius");
  }
  const NFunction nf = cfg.build_nfunction();
  const auto gd = cfg.build_grid();
  const auto kt = cfg.build_kernel(gd);
  const Nonlinearity nl = cfg.build_nonlinearity();
  const ReductionMode mode = cfg.reduction();
  const OperatorContext ctx{nf, kt, mode};
  Rng rng(cfg.seed);

  std::vector<CheckLine> lines;

  {  // Young inequality on a log-spaced (s,t) grid, normalized residual
    const auto ss = log_grid(1e-3, 1e3, 100);
    const auto ts = log_grid(1e-3, 1e3, 100);
    const auto conj = nf.conjugate_values_ascending(ss);
    const auto vals = nf.values_ascending(ts);
    double worst = 0.0;
    for (std::size_t a = 0; a < ss.size(); ++a) {
      for (std::size_t b = 0; b < ts.size(); ++b) {
        const double resid = vals[b] + conj[a] - ss[a] * ts[b];
        worst = std::min(worst, resid / (1.0 + vals[b] + conj[a]));
      }
    }
    CheckLine line{"young_nonneg", worst, -1e-9, worst - (-1e-9), worst >= -1e-9,
                   "min normalized residual over 100x100 grid"};
    lines.push_back(line);
  }

  {  // Young equality at s = a(t)
    const auto ts = log_grid(1e-3, 1e3, 100);
    std::vector<double> dens(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) dens[k] = nf.density(ts[k]);
    const auto conj = nf.conjugate_values_ascending(dens);
    const auto vals = nf.values_ascending(ts);
    double worst = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double resid = vals[k] + conj[k] - dens[k] * ts[k];
      worst = std::max(worst, std::abs(resid) / (1.0 + vals[k] + conj[k]));
    }
    lines.push_back(upper_bounded("young_equality", worst, 1e-8,
                                  "max |residual| at s = a(t), normalized"));
  }

  {  // Hoelder with constant 2
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const GridFunction u = random_omega_function(gd, rng);
      const GridFunction v = random_omega_function(gd, rng);
      const auto hc = holder_check(nf, u, v, mode);
      if (hc.rhs > 0.0) worst = std::max(worst, hc.lhs / hc.rhs);
    }
    lines.push_back(upper_bounded("holder", worst, 1.0 + 1e-9, "max lhs/rhs over 100 pairs"));
  }

  {  // modular-seminorm sandwich at rescaled seminorms
    const double targets[] = {0.25, 0.5, 2.0, 4.0};
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) {
      const GridFunction u = random_omega_function(gd, rng);
      const double sigma = gagliardo_seminorm(nf, *kt, u, mode).value;
      if (!(sigma > 0.0)) continue;
      for (const double target : targets) {
        const auto rep = sandwich_check(nf, *kt, u.scaled(target / sigma), 1e-8, mode);
        if (rep.indeterminate) continue;
        const double viol = std::max({(rep.lower - rep.phi) / rep.lower,
                                      (rep.phi - rep.upper) / rep.upper, 0.0});
        worst = std::max(worst, viol);
      }
    }
    lines.push_back(
        upper_bounded("sandwich", worst, 1e-8, "max normalized bound violation, 100 rescalings"));
  }

  {  // Poincare with the analytic constant
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const GridFunction u = random_omega_function(gd, rng);
      const auto pc = poincare_check(nf, *gd, *kt, u, *cfg.ball, mode);
      if (pc.rhs > 0.0) worst = std::max(worst, pc.lhs / pc.rhs);
    }
    lines.push_back(upper_bounded("poincare", worst, 1.0 + 1e-6, "max lhs/rhs over 50 functions"));
  }

  {  // conjugate-composition bound Abar(a(t)) <= c A(t), c <= p_upper - 1
    const double c = nf.conjugate_composition_ratio();
    lines.push_back(upper_bounded("conjugate_composition_ratio", c, nf.p_upper() - 1.0 + 1e-6,
                                  "sup Abar(a(t))/A(t) over index grid"));
  }

  {  // radial kernel integral against its closed majorant
    const double value = delta_radial_integral(nf, cfg.s, cfg.dim);
    const double bound = nf.value(1.0) * unit_sphere_measure(cfg.dim) *
                         (1.0 / cfg.s + 1.0 / (1.0 - cfg.s));
    lines.push_back(upper_bounded("delta_integral", value, bound * (1.0 + 1e-9),
                                  "radial quadrature vs closed majorant"));
    if (nf.kind() == NFunction::Kind::Power || nf.kind() == NFunction::Kind::PowerNormalized) {
      const double scale = nf.kind() == NFunction::Kind::Power ? 1.0 : 1.0 / nf.exponent();
      const double analytic = scale * unit_sphere_measure(cfg.dim) *
                              (1.0 / (cfg.s * nf.exponent()) +
                               1.0 / ((1.0 - cfg.s) * nf.exponent()));
      const double rel = std::abs(value - analytic) / analytic;
      lines.push_back(upper_bounded("delta_integral_analytic", rel, 5e-3,
                                    "relative error vs exact radial integral"));
    }
  }

  {  // index bracket for the pairing: p_lower phi <= <Lu,u> <= p_upper phi
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const GridFunction u = random_omega_function(gd, rng);
      const double phi = gagliardo_modular(nf, *kt, u, mode);
      const double pw = pairing(ctx, u, u);
      if (!(phi > 0.0)) continue;
      const double lo = nf.p_lower() * phi, hi = nf.p_upper() * phi;
      worst = std::max({worst, (lo - pw) / lo, (pw - hi) / hi});
    }
    lines.push_back(
        upper_bounded("pairing_bracket", worst, 1e-9, "max normalized violation, 100 functions"));
  }

  {  // directional derivative of the energy vs central differences
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const GridFunction u = random_omega_function(gd, rng);
      const GridFunction v = random_omega_function(gd, rng);
      const GridFunction g = grad_I(ctx, nl, u);
      double gv = 0.0;
      for (const int i : gd->omega_nodes()) gv += g[i] * v[i];
      const double eps = 1e-5 * (1.0 + u.max_abs());
      const double fd =
          (eval_I(ctx, nl, u.axpy(eps, v)) - eval_I(ctx, nl, u.axpy(-eps, v))) / (2.0 * eps);
      const double rel = std::abs(gv - fd) / std::max({std::abs(gv), std::abs(fd), 1e-12});
      worst = std::max(worst, rel);
    }
    lines.push_back(
        upper_bounded("gradient_fd", worst, 1e-5, "max relative error over 20 directions"));
  }

  {  // informational: kernel mass ignored outside the box
    const double tail = gd->truncation_tail_bound(cfg.s);
    CheckLine line{"truncation_tail", tail, tail, 0.0, true,
                   "bound on kernel mass beyond the computational box (informational)"};
    lines.push_back(line);
  }

  return lines;
}

bool write_verification_report(std::ostream& os, const std::vector<CheckLine>& lines) {
  bool all = true;
  for (const auto& line : lines) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-24s lhs=%-14.6g rhs=%-14.6g slack=%-14.6g %s",
                  line.name.c_str(), line.lhs, line.rhs, line.slack,
                  line.pass ? "PASS" : "FAIL");
    os << buf;
    if (!line.note.empty()) os << "  # " << line.note;
    os << "\n";
    all = all && line.pass;
  }
  os << (all ? "ALL CHECKS PASS" : "VERIFICATION FAILED") << "\n";
  return all;
}

}  // namespace fos
