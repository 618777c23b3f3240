#include "fos/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace fos {

std::shared_ptr<const KernelTable> KernelTable::build(std::shared_ptr<const GridDomain> gd,
                                                      double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("kernel: need 0 < s < 1");
  auto kt = std::shared_ptr<KernelTable>(new KernelTable());
  kt->gd_ = std::move(gd);
  kt->s_ = s;

  const GridDomain& g = *kt->gd_;
  const int n = g.node_count();
  const int dim = g.dim();
  const double cell2 = g.cell_measure() * g.cell_measure();  // h^{2N}
  kt->w_.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
  kt->dsinv_.resize(kt->w_.size());

  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      const double d = g.node_distance(i, j);
      kt->w_[k] = cell2 / std::pow(d, dim);
      kt->dsinv_[k] = std::pow(d, -s);
    }
  }
  return kt;
}

std::size_t KernelTable::pair_index(int i, int j) const {
  const auto n = static_cast<std::size_t>(gd_->node_count());
  const auto a = static_cast<std::size_t>(i);
  return a * n - a * (a + 1) / 2 + static_cast<std::size_t>(j - i) - 1;
}

std::pair<int, int> KernelTable::pair_nodes(std::size_t k) const {
  const int n = gd_->node_count();
  int i = 0;
  std::size_t row_start = 0;
  while (row_start + static_cast<std::size_t>(n - 1 - i) <= k) {
    row_start += static_cast<std::size_t>(n - 1 - i);
    ++i;
  }
  const int j = i + 1 + static_cast<int>(k - row_start);
  return {i, j};
}

double KernelTable::weight(int i, int j) const {
  if (i == j) throw std::invalid_argument("kernel: diagonal pair has no weight");
  return i < j ? w_[pair_index(i, j)] : w_[pair_index(j, i)];
}

}  // namespace fos
