#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "fos/energy.hpp"
#include "fos/grid.hpp"
#include "fos/kernel.hpp"
#include "fos/nfunction.hpp"

namespace fos {

// Flat sectioned key=value problem description.  Example:
//
//   [nfunction]
//   kind = power_normalized     # power | power_normalized | power_log
//   p = 2.0
//
//   [domain]
//   dim = 1
//   box_lo = 0          # one value per axis, space separated in 2-D
//   box_hi = 9.95
//   h = 0.05
//   omega_lo = 3
//   omega_hi = 7
//   omega0_lo = 4       # optional, defaults to omega
//   omega0_hi = 6
//   s = 0.5
//   ball_center = 1.5   # optional; needed by the Poincare check
//   ball_radius = 1
//
//   [nonlinearity]
//   form = pure_power   # pure_power | shifted_power
//   theta1 = 1
//   theta2 = 1
//   q = 1.5
//   eps = 0.1           # shifted_power only
//
//   [solver]
//   grad_tol = 1e-6
//   max_iters = 200000
//   armijo_c = 1e-4
//   armijo_shrink = 0.5
//   seed_scan_kmax = 20
//   lambda1_restarts = 20
//
//   [run]
//   seed = 12345
//   deterministic = true
//   threads = 1
struct RunConfig {
  // nfunction
  std::string nf_kind = "power_normalized";
  double nf_p = 2.0;
  std::optional<double> index_override_lower, index_override_upper;  // diagnostics

  // domain
  int dim = 1;
  Box box, omega, omega0;
  bool has_omega0 = false;
  double h = 0.0;
  double s = 0.5;
  std::optional<Ball> ball;

  // nonlinearity
  std::string nl_form = "pure_power";
  double theta1 = 1.0, theta2 = 1.0, q = 1.5, eps = 0.1;

  // solver
  SolverConfig solver;

  // run
  std::uint64_t seed = 1;
  bool deterministic = true;
  int threads = 1;

  NFunction build_nfunction() const;
  std::shared_ptr<const GridDomain> build_grid() const;
  std::shared_ptr<const KernelTable> build_kernel(std::shared_ptr<const GridDomain> gd) const;
  Nonlinearity build_nonlinearity() const;
  SolverConfig build_solver_config() const;
  ReductionMode reduction() const { return {threads, deterministic}; }
};

RunConfig parse_config(std::istream& is);
RunConfig parse_config_file(const std::string& path);

// echo of the effective configuration, key=value per line
void write_config_echo(std::ostream& os, const RunConfig& cfg);

}  // namespace fos
