#include "fos/frac_laplacian.hpp"

#include <cmath>

namespace fos {

GridFunction apply(const OperatorContext& ctx, const GridFunction& u) {
  const GridDomain& gd = ctx.grid();
  const KernelTable& kt = *ctx.kt;
  const double inv_cell = 1.0 / gd.cell_measure();
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
        const double sgn = diff > 0.0 ? 1.0 : -1.0;
        // h^N / d^{N+s} = weight * d^{-s} / h^N
        acc += ctx.nf.density(std::abs(diff) * dsinv) * sgn * w * dsinv;
      });
      out[static_cast<std::size_t>(i)] = 2.0 * acc * inv_cell;
    }
  });
  return GridFunction::from_values(u.grid_ptr(), std::move(out));
}

double pairing(const OperatorContext& ctx, const GridFunction& u, const GridFunction& v) {
  const KernelTable& kt = *ctx.kt;
  // each unordered pair appears twice in the ordered sum with equal terms
  return 2.0 * kt.pair_sum(ctx.mode, [&](std::size_t k, int i, int j) {
    const double du = u[i] - u[j];
    if (du == 0.0) return 0.0;
    const double dsinv = kt.inv_dist_pow_s_at(k);
    const double sgn = du > 0.0 ? 1.0 : -1.0;
    return ctx.nf.density(std::abs(du) * dsinv) * sgn * (v[i] - v[j]) * dsinv *
           kt.weight_at(k);
  });
}

}  // namespace fos
