#pragma once

#include <iosfwd>

#include "fos/grid.hpp"
#include "fos/kernel.hpp"
#include "fos/nfunction.hpp"
#include "fos/reduction.hpp"

namespace fos {

inline constexpr double kNormRelTol = 1e-12;  // bracket width for norm root-finding

struct RootResult {
  double value = 0.0;
  int iterations = 0;
};

// sum over omega of A(|u_i|) h^N
double modular(const NFunction& nf, const GridFunction& u, const ReductionMode& mode = {});

// inf{ lambda > 0 : modular(u/lambda) <= 1 }; 0 for the zero function.
// Bracket-doubling plus bisection; in the doubling regime the returned
// lambda satisfies modular(u/lambda) = 1 to ~1e-8.
RootResult luxemburg_norm(const NFunction& nf, const GridFunction& u,
                          const ReductionMode& mode = {});

// phi(u): sum over ordered node pairs i != j of A(|u_i-u_j| / d^s) * weight
double gagliardo_modular(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                         const ReductionMode& mode = {});

// inf{ lambda > 0 : phi(u/lambda) <= 1 }
RootResult gagliardo_seminorm(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                              const ReductionMode& mode = {});

struct HolderCheck {
  double lhs = 0.0;  // |sum u v h^N|
  double rhs = 0.0;  // 2 ||u||_A ||v||_conjA
};
HolderCheck holder_check(const NFunction& nf, const GridFunction& u, const GridFunction& v,
                         const ReductionMode& mode = {});

// Modular-seminorm bracket: with sigma = [u] and phi = phi(u),
//   sigma > 1:  sigma^{p_lower} <= phi <= sigma^{p_upper}
//   sigma < 1:  sigma^{p_upper} <= phi <= sigma^{p_lower}
// Near sigma = 1 both brackets collapse; reported, not judged.
struct SandwichReport {
  double sigma = 0.0;
  double phi = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool indeterminate = false;  // |sigma - 1| <= 1e-6
  bool holds = false;          // within rel_tol; true when indeterminate
};
SandwichReport sandwich_check(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                              double rel_tol = 1e-8, const ReductionMode& mode = {});

// ||u||_A <= mu [u]_{s,A} with mu = diam(omega U ball)^{N+s} / |ball|.
struct PoincareCheck {
  double lhs = 0.0;
  double mu = 0.0;
  double rhs = 0.0;
};
PoincareCheck poincare_check(const NFunction& nf, const GridDomain& gd, const KernelTable& kt,
                             const GridFunction& u, const Ball& ball,
                             const ReductionMode& mode = {});

struct NormReport {
  double luxemburg = 0.0;
  double gagliardo_seminorm = 0.0;
  double full_norm = 0.0;  // luxemburg + seminorm
  double modular = 0.0;
  double gagliardo_modular = 0.0;
  int bracket_iterations = 0;
};
NormReport norm_report(const NFunction& nf, const KernelTable& kt, const GridFunction& u,
                       const ReductionMode& mode = {});

void write_norm_report_kv(std::ostream& os, const NormReport& r);
void write_norm_report_csv(std::ostream& os, const NormReport& r, bool with_header);

}  // namespace fos
