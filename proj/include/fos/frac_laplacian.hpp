#pragma once

#include <memory>

#include "fos/grid.hpp"
#include "fos/kernel.hpp"
#include "fos/nfunction.hpp"
#include "fos/reduction.hpp"

namespace fos {

// Everything the fractional a-Laplacian needs: the Young function (through
// its density a), the kernel pair table, and the reduction policy.
struct OperatorContext {
  NFunction nf;
  std::shared_ptr<const KernelTable> kt;
  ReductionMode mode{};

  const GridDomain& grid() const { return kt->grid(); }
};

// Pointwise operator on omega nodes:
//   2 sum_{j != i} a(|u_i-u_j| / d^s) sgn(u_i-u_j) h^N / d^{N+s},
// zero on buffer nodes.  Terms with u_i = u_j vanish (a(0) = 0).
GridFunction apply(const OperatorContext& ctx, const GridFunction& u);

// Weak-form pairing: ordered-pair sum of
//   a(|h_ij(u)|) sgn(u_i-u_j) h_ij(v) weight(i,j),
// with h_ij(w) = (w_i-w_j)/d^s taken in the same orientation for u and v.
double pairing(const OperatorContext& ctx, const GridFunction& u, const GridFunction& v);

}  // namespace fos
