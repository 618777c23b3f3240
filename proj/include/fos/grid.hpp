#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "fos/nfunction.hpp"

namespace fos {

// Axis-aligned open box in 1 or 2 dimensions.
struct Box {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};

  static Box interval(double a, double b) { return Box{1, {a, 0.0}, {b, 0.0}}; }
  static Box rect(double ax, double ay, double bx, double by) {
    return Box{2, {ax, ay}, {bx, by}};
  }

  double extent(int ax) const { return hi[static_cast<std::size_t>(ax)] - lo[static_cast<std::size_t>(ax)]; }
  double diameter() const;
  bool contains_strict(const double* x, double tol) const;
  bool strictly_inside(const Box& outer) const;
};

// Ball used by the Poincare constant (never discretized).
struct Ball {
  int dim = 1;
  std::array<double, 2> center{0.0, 0.0};
  double radius = 0.0;
  double measure() const;  // 2R in 1-D, pi R^2 in 2-D
};

double unit_sphere_measure(int dim);  // 2 in 1-D, 2*pi in 2-D

// Uniform grid over a computational box B with two nested node masks:
// omega (where unknowns live) and omega0 (where the source-term lower bound
// is certified).  Every node outside omega is exterior buffer, where grid
// functions are pinned to zero.  Nodes are enumerated lexicographically by
// coordinate (x major, then y), so the ordering is reproducible.
class GridDomain {
 public:
  static std::shared_ptr<const GridDomain> build(int dim, const Box& box, double h,
                                                 const Box& omega, const Box& omega0);

  int dim() const { return dim_; }
  double h() const { return h_; }
  double cell_measure() const { return cell_measure_; }  // h^dim
  int node_count() const { return static_cast<int>(coords_.size()) / dim_; }
  const double* node(int i) const { return coords_.data() + static_cast<std::size_t>(i) * dim_; }
  double coord(int i, int ax) const { return coords_[static_cast<std::size_t>(i) * dim_ + ax]; }

  bool in_omega(int i) const { return omega_[static_cast<std::size_t>(i)] != 0; }
  bool in_omega0(int i) const { return omega0_[static_cast<std::size_t>(i)] != 0; }
  const std::vector<int>& omega_nodes() const { return omega_nodes_; }
  const std::vector<int>& omega0_nodes() const { return omega0_nodes_; }
  double omega_measure() const { return static_cast<double>(omega_nodes_.size()) * cell_measure_; }
  double diam_omega() const { return diam_omega_; }

  const Box& box() const { return box_; }
  const Box& omega_box() const { return omega_box_; }
  const Box& omega0_box() const { return omega0_box_; }

  double node_distance(int i, int j) const;

  // Upper bound on the kernel mass ignored outside the computational box:
  // surface * R^{-s} / s with R the closest approach of omega to the box
  // boundary.  Reported with every solve; the box is a truncation of the
  // whole space, not the model itself.
  double truncation_tail_bound(double s) const;

 private:
  GridDomain() = default;

  int dim_ = 1;
  double h_ = 0.0;
  double cell_measure_ = 0.0;
  Box box_, omega_box_, omega0_box_;
  std::array<int, 2> axis_nodes_{0, 0};
  std::vector<double> coords_;
  std::vector<std::uint8_t> omega_, omega0_;
  std::vector<int> omega_nodes_, omega0_nodes_;
  double diam_omega_ = 0.0;
};

// Node values over the whole box; exterior (buffer) entries stay zero.
class GridFunction {
 public:
  explicit GridFunction(std::shared_ptr<const GridDomain> gd);
  static GridFunction from_values(std::shared_ptr<const GridDomain> gd,
                                  std::vector<double> all_node_values);

  const GridDomain& grid() const { return *gd_; }
  const std::shared_ptr<const GridDomain>& grid_ptr() const { return gd_; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return v_; }

  void set_omega(int node, double value);  // throws on buffer nodes
  void fill_omega(double value);

  double max_abs() const;
  GridFunction scaled(double c) const;
  // this + alpha * other (omega entries only; buffers are zero on both sides)
  GridFunction axpy(double alpha, const GridFunction& other) const;

 private:
  std::shared_ptr<const GridDomain> gd_;
  std::vector<double> v_;
};

GridFunction random_omega_function(std::shared_ptr<const GridDomain> gd, class Rng& rng);

// Tent profile supported in omega0: 1 deep inside, tapering to 0 at the
// omega0 rim.  Used to seed the negative-energy scan.
GridFunction default_bump(std::shared_ptr<const GridDomain> gd);

// CSV with header "x,u" / "x,y,u", one row per node in grid order, 17
// significant digits.
void write_grid_function_csv(std::ostream& os, const GridFunction& u);
GridFunction read_grid_function_csv(std::istream& is, std::shared_ptr<const GridDomain> gd);

// Radial integral of A(min(1,r)/r^s) r^{-1} over (0, inf), times the unit
// sphere measure: the summability certificate for the kernel-weighted
// distance bump.  Finite for every valid A and 0 < s < 1.
double delta_radial_integral(const NFunction& nf, double s, int dim);

}  // namespace fos
