#include "fos/grid.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fos/errors.hpp"
#include "fos/quadrature.hpp"
#include "fos/rng.hpp"

namespace fos {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double Box::diameter() const {
  double d2 = 0.0;
  for (int ax = 0; ax < dim; ++ax) d2 += extent(ax) * extent(ax);
  return std::sqrt(d2);
}

bool Box::contains_strict(const double* x, double tol) const {
  for (int ax = 0; ax < dim; ++ax) {
    const auto a = static_cast<std::size_t>(ax);
    if (!(x[a] > lo[a] + tol && x[a] < hi[a] - tol)) return false;
  }
  return true;
}

bool Box::strictly_inside(const Box& outer) const {
  for (int ax = 0; ax < dim; ++ax) {
    const auto a = static_cast<std::size_t>(ax);
    if (!(lo[a] > outer.lo[a] && hi[a] < outer.hi[a])) return false;
  }
  return true;
}

double Ball::measure() const {
  return dim == 1 ? 2.0 * radius : kPi * radius * radius;
}

double unit_sphere_measure(int dim) {
  if (dim == 1) return 2.0;
  if (dim == 2) return 2.0 * kPi;
  throw std::invalid_argument("unit_sphere_measure: dim must be 1 or 2");
}

std::shared_ptr<const GridDomain> GridDomain::build(int dim, const Box& box, double h,
                                                    const Box& omega, const Box& omega0) {
  if (dim != 1 && dim != 2) throw ConfigError("grid: dim must be 1 or 2");
  if (!(h > 0.0)) throw ConfigError("grid: h must be positive");
  if (box.dim != dim || omega.dim != dim || omega0.dim != dim) {
    throw ConfigError("grid: box/omega/omega0 dimension mismatch");
  }
  if (!omega.strictly_inside(box)) {
    throw ConfigError("grid: omega must stay strictly inside the box (buffer layer required)");
  }
  for (int ax = 0; ax < dim; ++ax) {
    const auto a = static_cast<std::size_t>(ax);
    if (!(omega0.lo[a] >= omega.lo[a] && omega0.hi[a] <= omega.hi[a])) {
      throw ConfigError("grid: omega0 must be contained in omega");
    }
  }

  auto gd = std::shared_ptr<GridDomain>(new GridDomain());
  gd->dim_ = dim;
  gd->h_ = h;
  gd->cell_measure_ = std::pow(h, dim);
  gd->box_ = box;
  gd->omega_box_ = omega;
  gd->omega0_box_ = omega0;

  int total = 1;
  for (int ax = 0; ax < dim; ++ax) {
    const double cells = box.extent(ax) / h;
    const double rounded = std::round(cells);
    if (!(cells > 0.0) || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
      throw ConfigError("grid: h must divide the box extent on every axis");
    }
    gd->axis_nodes_[static_cast<std::size_t>(ax)] = static_cast<int>(rounded) + 1;
    total *= gd->axis_nodes_[static_cast<std::size_t>(ax)];
  }

  gd->coords_.resize(static_cast<std::size_t>(total) * dim);
  gd->omega_.assign(static_cast<std::size_t>(total), 0);
  gd->omega0_.assign(static_cast<std::size_t>(total), 0);

  const double mask_tol = 1e-6 * h;  // keeps boundary nodes out despite roundoff
  int idx = 0;
  const int ny = (dim == 2) ? gd->axis_nodes_[1] : 1;
  for (int ix = 0; ix < gd->axis_nodes_[0]; ++ix) {
    for (int iy = 0; iy < ny; ++iy, ++idx) {
      double x[2] = {box.lo[0] + ix * h, (dim == 2) ? box.lo[1] + iy * h : 0.0};
      for (int ax = 0; ax < dim; ++ax) {
        gd->coords_[static_cast<std::size_t>(idx) * dim + ax] = x[ax];
      }
      if (omega.contains_strict(x, mask_tol)) {
        gd->omega_[static_cast<std::size_t>(idx)] = 1;
        gd->omega_nodes_.push_back(idx);
        if (omega0.contains_strict(x, mask_tol)) {
          gd->omega0_[static_cast<std::size_t>(idx)] = 1;
          gd->omega0_nodes_.push_back(idx);
        }
      }
    }
  }

  if (gd->omega_nodes_.empty()) throw ConfigError("grid: omega contains no nodes");

  // max pairwise node distance in omega; per-axis extents suffice on a box
  double d2 = 0.0;
  for (int ax = 0; ax < dim; ++ax) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const int i : gd->omega_nodes_) {
      lo = std::min(lo, gd->coord(i, ax));
      hi = std::max(hi, gd->coord(i, ax));
    }
    d2 += (hi - lo) * (hi - lo);
  }
  gd->diam_omega_ = std::sqrt(d2) + h;  // one-cell safety margin

  return gd;
}

double GridDomain::node_distance(int i, int j) const {
  const double* a = node(i);
  const double* b = node(j);
  if (dim_ == 1) return std::abs(a[0] - b[0]);
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

double GridDomain::truncation_tail_bound(double s) const {
  double gap = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < dim_; ++ax) {
    const auto a = static_cast<std::size_t>(ax);
    gap = std::min(gap, omega_box_.lo[a] - box_.lo[a]);
    gap = std::min(gap, box_.hi[a] - omega_box_.hi[a]);
  }
  return unit_sphere_measure(dim_) * std::pow(gap, -s) / s;
}

GridFunction::GridFunction(std::shared_ptr<const GridDomain> gd)
    : gd_(std::move(gd)), v_(static_cast<std::size_t>(gd_->node_count()), 0.0) {}

GridFunction GridFunction::from_values(std::shared_ptr<const GridDomain> gd,
                                       std::vector<double> all_node_values) {
  if (static_cast<int>(all_node_values.size()) != gd->node_count()) {
    throw DataError("grid function: value count does not match node count");
  }
  for (int i = 0; i < gd->node_count(); ++i) {
    if (!gd->in_omega(i) && all_node_values[static_cast<std::size_t>(i)] != 0.0) {
      throw DataError("grid function: nonzero value at exterior node " + std::to_string(i));
    }
  }
  GridFunction u(gd);
  u.v_ = std::move(all_node_values);
  return u;
}

void GridFunction::set_omega(int node, double value) {
  if (!gd_->in_omega(node)) {
    if (value != 0.0) throw std::invalid_argument("grid function: cannot set exterior node");
    return;
  }
  v_[static_cast<std::size_t>(node)] = value;
}

void GridFunction::fill_omega(double value) {
  for (const int i : gd_->omega_nodes()) v_[static_cast<std::size_t>(i)] = value;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const int i : gd_->omega_nodes()) m = std::max(m, std::abs(v_[static_cast<std::size_t>(i)]));
  return m;
}

GridFunction GridFunction::scaled(double c) const {
  GridFunction out(gd_);
  for (const int i : gd_->omega_nodes()) {
    out.v_[static_cast<std::size_t>(i)] = c * v_[static_cast<std::size_t>(i)];
  }
  return out;
}

GridFunction GridFunction::axpy(double alpha, const GridFunction& other) const {
  GridFunction out(gd_);
  for (const int i : gd_->omega_nodes()) {
    const auto k = static_cast<std::size_t>(i);
    out.v_[k] = v_[k] + alpha * other.v_[k];
  }
  return out;
}

GridFunction random_omega_function(std::shared_ptr<const GridDomain> gd, Rng& rng) {
  GridFunction u(gd);
  for (const int i : gd->omega_nodes()) u.set_omega(i, rng.symmetric());
  return u;
}

GridFunction default_bump(std::shared_ptr<const GridDomain> gd) {
  const auto& inner = gd->omega0_nodes();
  if (inner.empty()) throw ConfigError("bump: omega0 contains no nodes");
  // distance to the nearest node outside omega0
  std::vector<double> dist(inner.size(), std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < inner.size(); ++k) {
    for (int j = 0; j < gd->node_count(); ++j) {
      if (gd->in_omega0(j)) continue;
      dist[k] = std::min(dist[k], gd->node_distance(inner[k], j));
    }
  }
  double peak = 0.0;
  for (const double d : dist) peak = std::max(peak, d);
  GridFunction bump(gd);
  for (std::size_t k = 0; k < inner.size(); ++k) {
    bump.set_omega(inner[k], std::min(1.0, 2.0 * dist[k] / peak));
  }
  return bump;
}

void write_grid_function_csv(std::ostream& os, const GridFunction& u) {
  const GridDomain& gd = u.grid();
  os << (gd.dim() == 1 ? "x,u" : "x,y,u") << "\n";
  for (int i = 0; i < gd.node_count(); ++i) {
    os << fmt17(gd.coord(i, 0));
    if (gd.dim() == 2) os << "," << fmt17(gd.coord(i, 1));
    os << "," << fmt17(u[i]) << "\n";
  }
}

GridFunction read_grid_function_csv(std::istream& is, std::shared_ptr<const GridDomain> gd) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("csv: empty input");
  const std::string want_header = gd->dim() == 1 ? "x,u" : "x,y,u";
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != want_header) {
    throw DataError("csv: expected header '" + want_header + "', got '" + line + "'");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(gd->node_count()));
  int row = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= gd->node_count()) throw DataError("csv: more rows than grid nodes");
    std::istringstream ls(line);
    double fields[3] = {0, 0, 0};
    const int want = gd->dim() + 1;
    char sep = 0;
    for (int f = 0; f < want; ++f) {
      if (!(ls >> fields[f])) {
        throw DataError("csv: row " + std::to_string(row + 2) + ": malformed value");
      }
      if (f + 1 < want && !(ls >> sep && sep == ',')) {
        throw DataError("csv: row " + std::to_string(row + 2) + ": expected comma");
      }
    }
    for (int ax = 0; ax < gd->dim(); ++ax) {
      const double want_c = gd->coord(row, ax);
      if (std::abs(fields[ax] - want_c) > 1e-9 * (1.0 + std::abs(want_c))) {
        throw DataError("csv: row " + std::to_string(row + 2) +
                        ": node coordinate mismatch (grid order is lexicographic)");
      }
    }
    values.push_back(fields[gd->dim()]);
    ++row;
  }
  if (row != gd->node_count()) throw DataError("csv: fewer rows than grid nodes");
  return GridFunction::from_values(gd, std::move(values));
}

double delta_radial_integral(const NFunction& nf, double s, int dim) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("delta_radial_integral: need 0 < s < 1");
  const double surface = unit_sphere_measure(dim);
  // In log radius the two pieces decay like exp(-(1-s) p0 |u|) and
  // exp(-s p0 v); cut where the tails are below 1e-17 of A(1).
  const double p0 = nf.p_lower();
  const double inner_cut = -40.0 / ((1.0 - s) * p0);
  const double outer_cut = 40.0 / (s * p0);
  const double inner = integrate(
      [&](double u) { return nf.value(std::exp((1.0 - s) * u)); }, inner_cut, 0.0, 1e-9);
  const double outer = integrate(
      [&](double v) { return nf.value(std::exp(-s * v)); }, 0.0, outer_cut, 1e-9);
  return surface * (inner + outer);
}

}  // namespace fos
