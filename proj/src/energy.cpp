#include "fos/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fos/errors.hpp"
#include "fos/orlicz.hpp"
#include "fos/rng.hpp"

namespace fos {

namespace {

// roundoff guard for the sampled growth checks; interpolated forms cancel
// near t = 0 at about this relative level
constexpr double kCheckSlack = 1e-9;

// sample grid for the growth-envelope checks: 0 and +-logspace
std::vector<double> check_points() {
  std::vector<double> ts{0.0};
  const int n = 80;
  for (int k = 0; k < n; ++k) {
    const double t = std::exp(std::log(1e-6) + (std::log(1e3) - std::log(1e-6)) * k / (n - 1));
    ts.push_back(t);
    ts.push_back(-t);
  }
  return ts;
}

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

Nonlinearity Nonlinearity::pure_power(double theta2, double q, double theta1) {
  if (!(q > 1.0)) throw std::invalid_argument("nonlinearity: need q > 1");
  if (!(theta2 >= 0.0) || !(theta1 > 0.0)) {
    throw std::invalid_argument("nonlinearity: need theta1 > 0, theta2 >= 0");
  }
  Nonlinearity nl;
  nl.form_ = Form::PurePower;
  nl.theta1_ = theta1;
  nl.theta2_ = theta2;
  nl.q_ = q;
  nl.run_sampled_checks();
  return nl;
}

Nonlinearity Nonlinearity::shifted_power(double theta1, double theta2, double q, double eps) {
  if (!(q > 1.0)) throw std::invalid_argument("nonlinearity: need q > 1");
  if (!(theta1 > 0.0) || !(theta2 >= 0.0)) {
    throw std::invalid_argument("nonlinearity: need theta1 > 0, theta2 >= 0");
  }
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("nonlinearity: shifted form needs eps in (0,1]");
  }
  Nonlinearity nl;
  nl.form_ = Form::ShiftedPower;
  nl.theta1_ = theta1;
  nl.theta2_ = theta2;
  nl.q_ = q;
  nl.eps_ = eps;
  nl.run_sampled_checks();
  return nl;
}

Nonlinearity Nonlinearity::custom_table(std::vector<double> t, std::vector<double> f,
                                        double theta1, double theta2, double q) {
  if (t.size() != f.size() || t.size() < 3) {
    throw std::invalid_argument("nonlinearity: need matching sample arrays");
  }
  if (!(q > 1.0) || !(theta1 > 0.0) || !(theta2 >= 0.0)) {
    throw std::invalid_argument("nonlinearity: bad growth parameters");
  }
  std::size_t zero = t.size();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0 && !(t[k] > t[k - 1])) {
      throw std::invalid_argument("nonlinearity: sample points must increase");
    }
    if (t[k] == 0.0) zero = k;
  }
  if (zero == t.size()) throw std::invalid_argument("nonlinearity: sample grid must contain t=0");

  Nonlinearity nl;
  nl.form_ = Form::CustomTable;
  nl.theta1_ = theta1;
  nl.theta2_ = theta2;
  nl.q_ = q;
  nl.tab_t_ = std::move(t);
  nl.tab_f_ = std::move(f);
  // trapezoid prefix from t=0 in both directions (exact for the interpolant)
  nl.tab_prefix_.assign(nl.tab_t_.size(), 0.0);
  for (std::size_t k = zero + 1; k < nl.tab_t_.size(); ++k) {
    nl.tab_prefix_[k] = nl.tab_prefix_[k - 1] +
                        0.5 * (nl.tab_f_[k] + nl.tab_f_[k - 1]) * (nl.tab_t_[k] - nl.tab_t_[k - 1]);
  }
  for (std::size_t k = zero; k-- > 0;) {
    nl.tab_prefix_[k] = nl.tab_prefix_[k + 1] -
                        0.5 * (nl.tab_f_[k + 1] + nl.tab_f_[k]) * (nl.tab_t_[k + 1] - nl.tab_t_[k]);
  }
  nl.run_sampled_checks();
  return nl;
}

double Nonlinearity::f(double t) const {
  switch (form_) {
    case Form::PurePower:
      return t == 0.0 ? 0.0 : theta2_ * std::pow(std::abs(t), q_ - 2.0) * t;
    case Form::ShiftedPower: {
      const double raw =
          theta1_ * (eps_ + (t == 0.0 ? 0.0 : std::pow(std::abs(t), q_ - 2.0) * t));
      const double cap = theta1_ * (1.0 + std::pow(std::abs(t), q_ - 1.0));
      return std::clamp(raw, -cap, cap);
    }
    case Form::CustomTable: {
      const auto& ts = tab_t_;
      if (t <= ts.front()) {
        const double slope = (tab_f_[1] - tab_f_[0]) / (ts[1] - ts[0]);
        return tab_f_.front() + slope * (t - ts.front());
      }
      if (t >= ts.back()) {
        const std::size_t n = ts.size();
        const double slope = (tab_f_[n - 1] - tab_f_[n - 2]) / (ts[n - 1] - ts[n - 2]);
        return tab_f_.back() + slope * (t - ts.back());
      }
      const auto it = std::upper_bound(ts.begin(), ts.end(), t);
      const std::size_t k = static_cast<std::size_t>(it - ts.begin());
      const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
      return tab_f_[k - 1] + w * (tab_f_[k] - tab_f_[k - 1]);
    }
  }
  return 0.0;
}

double Nonlinearity::F(double t) const {
  switch (form_) {
    case Form::PurePower:
      return theta2_ * std::pow(std::abs(t), q_) / q_;
    case Form::ShiftedPower:
      return theta1_ * (eps_ * t + std::pow(std::abs(t), q_) / q_);
    case Form::CustomTable: {
      const auto& ts = tab_t_;
      std::size_t k;
      if (t <= ts.front()) {
        k = 0;
      } else if (t >= ts.back()) {
        k = ts.size() - 1;
      } else {
        k = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
      }
      return tab_prefix_[k] + 0.5 * (f(t) + tab_f_[k]) * (t - ts[k]);
    }
  }
  return 0.0;
}

void Nonlinearity::run_sampled_checks() {
  f2_ok_ = true;
  f2_signed_ok_ = true;
  for (const double t : check_points()) {
    const double ft = f(t);
    const double grow = std::pow(std::abs(t), q_ - 1.0);
    if (std::abs(ft) > theta1_ * (1.0 + grow) * (1.0 + kCheckSlack)) {
      throw std::invalid_argument("nonlinearity: upper growth bound fails at sampled t");
    }
    if (std::abs(ft) < theta2_ * grow * (1.0 - kCheckSlack)) f2_ok_ = false;
    if (ft * sgn(t) < theta2_ * grow * (1.0 - kCheckSlack) && t != 0.0) f2_signed_ok_ = false;
  }
}

std::vector<double> SolverConfig::default_seed_scan() {
  std::vector<double> scan;
  for (int k = 0; k <= 20; ++k) scan.push_back(std::ldexp(1.0, -k));
  return scan;
}

double eval_J(const OperatorContext& ctx, const GridFunction& u) {
  return gagliardo_modular(ctx.nf, *ctx.kt, u, ctx.mode);
}

double eval_H(const Nonlinearity& nl, const GridDomain& gd, const GridFunction& u,
              const ReductionMode& mode) {
  const auto& nodes = gd.omega_nodes();
  return gd.cell_measure() * blocked_sum(nodes.size(), mode, [&](std::size_t k0, std::size_t k1) {
           double acc = 0.0;
           for (std::size_t k = k0; k < k1; ++k) acc += nl.F(u[nodes[k]]);
           return acc;
         });
}

double eval_I(const OperatorContext& ctx, const Nonlinearity& nl, const GridFunction& u) {
  return eval_J(ctx, u) - eval_H(nl, ctx.grid(), u, ctx.mode);
}

namespace {

// weak gradient of the kernel modular alone (no source term)
GridFunction grad_modular_part(const OperatorContext& ctx, const GridFunction& u) {
  const GridDomain& gd = ctx.grid();
  const KernelTable& kt = *ctx.kt;
  const auto& nodes = gd.omega_nodes();
  std::vector<double> out(static_cast<std::size_t>(gd.node_count()), 0.0);
  blocked_for(nodes.size(), ctx.mode.threads, [&](std::size_t k0, std::size_t k1) {
    for (std::size_t k = k0; k < k1; ++k) {
      const int i = nodes[k];
      const double ui = u[i];
      double acc = 0.0;
      kt.for_each_partner(i, [&](int j, double w, double dsinv) {
        const double diff = ui - u[j];
        if (diff == 0.0) return;
        acc += ctx.nf.density(std::abs(diff) * dsinv) * (diff > 0.0 ? 1.0 : -1.0) * w * dsinv;
      });
      out[static_cast<std::size_t>(i)] = 2.0 * acc;
    }
  });
  return GridFunction::from_values(u.grid_ptr(), std::move(out));
}

double dot_omega(const GridDomain& gd, const GridFunction& a, const GridFunction& b) {
  double acc = 0.0;
  for (const int i : gd.omega_nodes()) acc += a[i] * b[i];
  return acc;
}

}  // namespace

GridFunction grad_I(const OperatorContext& ctx, const Nonlinearity& nl, const GridFunction& u) {
  const GridDomain& gd = ctx.grid();
  const double cell = gd.cell_measure();
  GridFunction g = grad_modular_part(ctx, u);
  std::vector<double> v = g.values();
  for (const int i : gd.omega_nodes()) {
    v[static_cast<std::size_t>(i)] -= nl.f(u[i]) * cell;
  }
  return GridFunction::from_values(u.grid_ptr(), std::move(v));
}

double residual_sup_norm(const GridDomain& gd, const GridFunction& g) {
  return g.max_abs() / gd.cell_measure();
}

std::optional<std::pair<double, double>> seed_nontrivial(const OperatorContext& ctx,
                                                         const Nonlinearity& nl,
                                                         const GridFunction& bump,
                                                         const std::vector<double>& scan) {
  const GridDomain& gd = ctx.grid();
  for (int i = 0; i < gd.node_count(); ++i) {
    const double b = bump[i];
    if (b < 0.0 || b > 1.0) {
      throw std::invalid_argument("seed: bump values must lie in [0,1]");
    }
    if (b != 0.0 && !gd.in_omega0(i)) {
      throw std::invalid_argument("seed: bump must be supported in omega0");
    }
  }
  for (const double t : scan) {
    const double value = eval_I(ctx, nl, bump.scaled(t));
    if (value < 0.0) return std::make_pair(t, value);
  }
  return std::nullopt;
}

Solution minimize(const OperatorContext& ctx, const Nonlinearity& nl, const SolverConfig& cfg) {
  const GridDomain& gd = ctx.grid();
  const double p0 = ctx.nf.p_lower();
  const double q = nl.q();

  if (q < p0 - 1e-9) {
    // subcritical regime, coercive as is
  } else if (std::abs(q - p0) <= 1e-9) {
    const double lam = lambda1_estimate(ctx, cfg).value;
    if (!(nl.theta1() < 0.5 * lam)) {
      throw RegimeError("minimize: q = p_lower requires theta1 < lambda1/2 (estimate " +
                        std::to_string(lam) + ")");
    }
  } else {
    throw RegimeError("minimize: q > p_lower is outside the coercive regime");
  }

  std::vector<double> scan = cfg.seed_scan.empty() ? SolverConfig::default_seed_scan() : cfg.seed_scan;
  for (std::size_t k = 1; k < scan.size(); ++k) {
    if (!(scan[k] < scan[k - 1])) {
      throw std::invalid_argument("minimize: seed scan must decrease strictly");
    }
  }

  Solution sol{GridFunction(ctx.kt->grid_ptr()), 0.0, 0.0, 0, false, false, std::nullopt};
  if (!gd.omega0_nodes().empty()) {
    const GridFunction bump = default_bump(ctx.kt->grid_ptr());
    if (const auto seed = seed_nontrivial(ctx, nl, bump, scan)) {
      sol.u = bump.scaled(seed->first);
      sol.seed_t = seed->first;
    }
  }

  double energy = eval_I(ctx, nl, sol.u);
  GridFunction g = grad_I(ctx, nl, sol.u);
  GridFunction u_prev = sol.u;
  GridFunction g_prev = g;
  double alpha = 0.0;
  bool have_prev = false;

  while (sol.iters < cfg.max_iters) {
    const double res = residual_sup_norm(gd, g);
    if (res <= cfg.grad_tol) {
      sol.converged = true;
      break;
    }
    const double g2 = dot_omega(gd, g, g);

    double trial;
    if (have_prev) {
      // Barzilai-Borwein spectral step as the first Armijo trial
      const GridFunction su = sol.u.axpy(-1.0, u_prev);
      const GridFunction sy = g.axpy(-1.0, g_prev);
      const double ss = dot_omega(gd, su, su);
      const double sy_dot = dot_omega(gd, su, sy);
      trial = (sy_dot > 0.0) ? ss / sy_dot : 2.0 * alpha;
    } else {
      trial = 0.1 * (1.0 + sol.u.max_abs()) / (1.0 + g.max_abs());
    }
    trial = std::clamp(trial, 1e-14, 1e14);

    bool accepted = false;
    double new_energy = 0.0;
    GridFunction candidate = sol.u;
    while (trial >= 1e-20) {
      candidate = sol.u.axpy(-trial, g);
      new_energy = eval_I(ctx, nl, candidate);
      if (new_energy <= energy - cfg.armijo_c * trial * g2) {
        accepted = true;
        break;
      }
      trial *= cfg.armijo_shrink;
    }
    if (!accepted) break;  // stalled at machine scale

    u_prev = sol.u;
    g_prev = g;
    sol.u = candidate;
    energy = new_energy;
    g = grad_I(ctx, nl, sol.u);
    alpha = trial;
    have_prev = true;
    ++sol.iters;
  }

  sol.energy = energy;
  sol.grad_norm = residual_sup_norm(gd, g);
  sol.converged = sol.grad_norm <= cfg.grad_tol;
  sol.nontrivial = sol.energy < 0.0;
  return sol;
}

namespace {

double seminorm_of(const OperatorContext& ctx, const GridFunction& u) {
  if (ctx.nf.p_lower() == ctx.nf.p_upper()) {
    const double phi = gagliardo_modular(ctx.nf, *ctx.kt, u, ctx.mode);
    return std::pow(phi, 1.0 / ctx.nf.p_lower());
  }
  return gagliardo_seminorm(ctx.nf, *ctx.kt, u, ctx.mode).value;
}

double lp_power_sum(const GridDomain& gd, const GridFunction& u, double p) {
  double acc = 0.0;
  for (const int i : gd.omega_nodes()) acc += std::pow(std::abs(u[i]), p);
  return acc * gd.cell_measure();
}

}  // namespace

double lambda1_quotient(const OperatorContext& ctx, const GridFunction& u) {
  const double p0 = ctx.nf.p_lower();
  const double sigma = gagliardo_seminorm(ctx.nf, *ctx.kt, u, ctx.mode).value;
  const double mass = lp_power_sum(ctx.grid(), u, p0);
  if (!(mass > 0.0)) throw std::invalid_argument("lambda1_quotient: zero function");
  return std::pow(sigma, p0) / mass;
}

Lambda1Result lambda1_estimate(const OperatorContext& ctx, const SolverConfig& cfg) {
  const GridDomain& gd = ctx.grid();
  const double p0 = ctx.nf.p_lower();
  Rng rng(cfg.rng_seed);

  Lambda1Result best{std::numeric_limits<double>::infinity(), GridFunction(ctx.kt->grid_ptr())};

  for (int restart = 0; restart < cfg.lambda1_restarts; ++restart) {
    GridFunction u = random_omega_function(ctx.kt->grid_ptr(), rng);
    double sigma = seminorm_of(ctx, u);
    if (!(sigma > 0.0)) continue;
    u = u.scaled(1.0 / sigma);

    // log quotient at sigma(u) = 1 is -log mass; descend it
    double mass = lp_power_sum(gd, u, p0);
    double L = -std::log(mass);
    double alpha = 0.0;
    GridFunction u_prev = u, g_prev = u;
    bool have_prev = false;
    int flat = 0;

    for (long iter = 0; iter < cfg.lambda1_max_iters; ++iter) {
      const GridFunction G = grad_modular_part(ctx, u);
      const double pw = pairing(ctx, u, u);
      std::vector<double> gv(static_cast<std::size_t>(gd.node_count()), 0.0);
      double gmax = 0.0;
      for (const int i : gd.omega_nodes()) {
        const double ui = u[i];
        const double dlog_lp =
            (ui == 0.0 ? 0.0 : std::pow(std::abs(ui), p0 - 1.0) * sgn(ui)) * gd.cell_measure() /
            mass;
        const double val = p0 * (G[i] / pw - dlog_lp);
        gv[static_cast<std::size_t>(i)] = val;
        gmax = std::max(gmax, std::abs(val));
      }
      if (gmax <= 1e-10) break;
      GridFunction g = GridFunction::from_values(ctx.kt->grid_ptr(), std::move(gv));
      const double g2 = dot_omega(gd, g, g);

      double trial;
      if (have_prev) {
        const GridFunction su = u.axpy(-1.0, u_prev);
        const GridFunction sy = g.axpy(-1.0, g_prev);
        const double ss = dot_omega(gd, su, su);
        const double sy_dot = dot_omega(gd, su, sy);
        trial = (sy_dot > 0.0) ? ss / sy_dot : 2.0 * alpha;
      } else {
        trial = 0.1 / (1.0 + g.max_abs());
      }
      trial = std::clamp(trial, 1e-14, 1e6);

      bool accepted = false;
      GridFunction candidate = u;
      double cand_sigma = 0.0, cand_mass = 0.0, cand_L = 0.0;
      while (trial >= 1e-18) {
        candidate = u.axpy(-trial, g);
        cand_sigma = seminorm_of(ctx, candidate);
        if (cand_sigma > 0.0) {
          cand_mass = lp_power_sum(gd, candidate, p0);
          cand_L = p0 * std::log(cand_sigma) - std::log(cand_mass);
          if (cand_L <= L - cfg.armijo_c * trial * g2) {
            accepted = true;
            break;
          }
        }
        trial *= cfg.armijo_shrink;
      }
      if (!accepted) break;

      u_prev = u;
      g_prev = g;
      alpha = trial;
      have_prev = true;
      // renormalize to sigma = 1 (the quotient is scale invariant)
      u = candidate.scaled(1.0 / cand_sigma);
      mass = lp_power_sum(gd, u, p0);
      const double newL = -std::log(mass);
      flat = (L - newL < 1e-14 * (1.0 + std::abs(L))) ? flat + 1 : 0;
      L = newL;
      if (flat >= 5) break;
    }

    const double quotient = std::exp(L);
    if (quotient < best.value) {
      best.value = quotient;
      best.minimizer = u;
    }
  }

  // report the quotient of the returned minimizer, evaluated the public way
  best.value = lambda1_quotient(ctx, best.minimizer);
  return best;
}

}  // namespace fos
