#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fos/frac_laplacian.hpp"
#include "fos/grid.hpp"

namespace fos {

// Right-hand side f(x,t) with growth envelope
//   |f(x,t)| <= theta1 (1 + |t|^{q-1})   on omega        (upper bound)
//   |f(x,t)| >= theta2 |t|^{q-1}         on omega0       (lower bound)
// Built-ins are x-independent; omega0 is where the lower bound is claimed.
//
// The upper bound is checked on a sample grid at construction and is fatal.
// The lower bound and its signed strengthening f(t) sgn(t) >= theta2|t|^{q-1}
// (what the negative-energy seeding actually uses) are checked and recorded;
// a form that misses them is usable but carries a warning flag.
class Nonlinearity {
 public:
  enum class Form { PurePower, ShiftedPower, CustomTable };

  // f(t) = theta2 |t|^{q-2} t on all of omega
  static Nonlinearity pure_power(double theta2, double q, double theta1);
  // f(t) = theta1 (eps + |t|^{q-2} t), eps in (0,1], clipped to the growth
  // envelope (a no-op for eps <= 1); f(0) != 0
  static Nonlinearity shifted_power(double theta1, double theta2, double q, double eps);
  // piecewise-linear sample of f over a t-grid spanning 0
  static Nonlinearity custom_table(std::vector<double> t, std::vector<double> f, double theta1,
                                   double theta2, double q);

  Form form() const { return form_; }
  double theta1() const { return theta1_; }
  double theta2() const { return theta2_; }
  double q() const { return q_; }

  double f(double t) const;
  double F(double t) const;  // primitive, F(0) = 0

  bool lower_bound_sampled_ok() const { return f2_ok_; }
  bool signed_lower_bound_sampled_ok() const { return f2_signed_ok_; }

 private:
  Nonlinearity() = default;
  void run_sampled_checks();

  Form form_ = Form::PurePower;
  double theta1_ = 0.0, theta2_ = 0.0, q_ = 2.0, eps_ = 0.0;
  std::vector<double> tab_t_, tab_f_, tab_prefix_;
  bool f2_ok_ = false, f2_signed_ok_ = false;
};

struct SolverConfig {
  double grad_tol = 1e-6;    // sup norm of the residual density apply(u) - f(u)
  long max_iters = 200000;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  std::vector<double> seed_scan;  // default 2^{-k}, k = 0..20
  bool deterministic_reduction = true;
  int threads = 1;
  std::uint64_t rng_seed = 1;
  int lambda1_restarts = 20;
  long lambda1_max_iters = 2000;

  ReductionMode reduction() const { return {threads, deterministic_reduction}; }
  static std::vector<double> default_seed_scan();
};

struct Solution {
  GridFunction u;
  double energy = 0.0;
  double grad_norm = 0.0;  // residual-density sup norm at exit
  long iters = 0;
  bool converged = false;  // grad_norm <= grad_tol reached
  bool nontrivial = false;  // energy < 0
  std::optional<double> seed_t;
};

// J(u): the kernel-weighted Young modular of the difference quotients
// (identical quadrature to gagliardo_modular).
double eval_J(const OperatorContext& ctx, const GridFunction& u);
// H(u) = sum over omega of F(u_i) h^N
double eval_H(const Nonlinearity& nl, const GridDomain& gd, const GridFunction& u,
              const ReductionMode& mode = {});
// I = J - H
double eval_I(const OperatorContext& ctx, const Nonlinearity& nl, const GridFunction& u);

// Weak gradient of I in the nodal basis: on omega nodes
//   g_i = 2 sum_{j != i} a(|h_ij|) sgn(u_i-u_j) weight(i,j) / d^s - f(u_i) h^N,
// zero on the buffer.
GridFunction grad_I(const OperatorContext& ctx, const Nonlinearity& nl, const GridFunction& u);

// sup_i |g_i| / h^N: the strong-form residual scale the solver stops on
double residual_sup_norm(const GridDomain& gd, const GridFunction& g);

// First t in the scan (descending) with I(t * bump) < 0.  The bump must be
// supported in omega0 with values in [0,1].  Returns (t, I(t*bump)).
std::optional<std::pair<double, double>> seed_nontrivial(const OperatorContext& ctx,
                                                         const Nonlinearity& nl,
                                                         const GridFunction& bump,
                                                         const std::vector<double>& scan);

// Steepest descent with Armijo backtracking from the seeded start (or from
// zero when seeding fails).  Energy iterates never increase.  Requires the
// coercive regime: q < p_lower, or q = p_lower with theta1 < lambda1/2.
Solution minimize(const OperatorContext& ctx, const Nonlinearity& nl, const SolverConfig& cfg);

struct Lambda1Result {
  double value = 0.0;  // an upper bound for the infimum
  GridFunction minimizer;
};

// inf ||u||^{p0} / ||u||_{L^{p0}}^{p0} over u != 0, estimated by normalized
// descent on the log quotient from seeded random starts; best value found.
Lambda1Result lambda1_estimate(const OperatorContext& ctx, const SolverConfig& cfg);

// Rayleigh quotient at a given u (the functional lambda1 minimizes).
double lambda1_quotient(const OperatorContext& ctx, const GridFunction& u);

}  // namespace fos
