#pragma once

#include <cstddef>
#include <memory>
#include <utility>

#include "fos/grid.hpp"
#include "fos/reduction.hpp"

namespace fos {

// Pair data for the singular product measure |x-y|^{-N} dx dy on the box:
// for each unordered node pair i < j it stores
//
//   weight(i,j)   = h^{2N} / |x_i - x_j|^N   (the measure of one cell pair)
//   dist_pow_s(i,j)^{-1} = |x_i - x_j|^{-s}  (the difference-quotient scale)
//
// The diagonal carries no mass: the integrand vanishes there for grid data,
// which is exactly what the principal value prescribes.
class KernelTable {
 public:
  static std::shared_ptr<const KernelTable> build(std::shared_ptr<const GridDomain> gd, double s);

  const GridDomain& grid() const { return *gd_; }
  const std::shared_ptr<const GridDomain>& grid_ptr() const { return gd_; }
  double s() const { return s_; }

  std::size_t pair_count() const { return w_.size(); }
  double weight_at(std::size_t k) const { return w_[k]; }
  double inv_dist_pow_s_at(std::size_t k) const { return dsinv_[k]; }

  std::size_t pair_index(int i, int j) const;         // requires i < j
  std::pair<int, int> pair_nodes(std::size_t k) const;
  double weight(int i, int j) const;                  // symmetric, i != j
  double dist(int i, int j) const { return gd_->node_distance(i, j); }

  // f(j, weight, inv_dist_pow_s) over all partners j != i, ascending j.
  template <class F>
  void for_each_partner(int i, F&& f) const {
    const int n = gd_->node_count();
    for (int j = 0; j < i; ++j) {
      const std::size_t k = pair_index(j, i);
      f(j, w_[k], dsinv_[k]);
    }
    for (int j = i + 1; j < n; ++j) {
      const std::size_t k = pair_index(i, j);
      f(j, w_[k], dsinv_[k]);
    }
  }

  // Blocked sum of term(k, i, j) over packed pairs; deterministic per mode.
  template <class Term>
  double pair_sum(const ReductionMode& mode, Term&& term) const {
    return blocked_sum(pair_count(), mode, [&](std::size_t k0, std::size_t k1) {
      auto [i, j] = pair_nodes(k0);
      const int n = gd_->node_count();
      double acc = 0.0;
      for (std::size_t k = k0; k < k1; ++k) {
        acc += term(k, i, j);
        if (++j == n) {
          ++i;
          j = i + 1;
        }
      }
      return acc;
    });
  }

 private:
  KernelTable() = default;

  std::shared_ptr<const GridDomain> gd_;
  double s_ = 0.0;
  std::vector<double> w_, dsinv_;
};

}  // namespace fos
