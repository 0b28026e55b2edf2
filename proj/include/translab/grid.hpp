#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace translab {

/// Lattice coordinates and vectors; 1D grids use only component 0.
using Vec = std::array<double, 2>;

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += a[k] * b[k];
  return s;
}

enum class DomainKind { interval, rectangle, disk };

enum class NodeClass : unsigned char { interior, boundary, exterior };

/// interval: bounds = {lo, hi}; rectangle: {x_lo, x_hi, y_lo, y_hi};
/// disk: {cx, cy, radius} on the lattice covering [c - r, c + r]^2.
struct DomainSpec {
  DomainKind kind = DomainKind::interval;
  std::vector<double> bounds{0.0, 1.0};
  std::array<int, 2> resolution{11, 11};

  int dim() const noexcept { return kind == DomainKind::interval ? 1 : 2; }
};

/// Precomputed geometry for enforcing the boundary condition at one node.
struct BoundaryNode {
  std::size_t node = 0;
  Vec normal{};            // inward unit normal
  int axis = 0;            // dominant axis of the normal
  int dir = 1;             // sign of the normal along `axis`
  std::size_t inward = 0;  // neighbor one step along dir * e_axis
  std::size_t reference = 0;  // interior node whose Hessian closes the boundary stencil
  Vec to_boundary{};       // x_boundary_point - x_node (zero on lattice-aligned boundaries)
};

/// Immutable uniform lattice with node classification and boundary geometry.
class Grid {
 public:
  const DomainSpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return cls_.size(); }
  int extent(int axis) const noexcept { return n_[axis]; }
  double spacing(int axis) const noexcept { return h_[axis]; }
  double min_spacing() const noexcept { return dim_ == 1 ? h_[0] : std::min(h_[0], h_[1]); }

  NodeClass classify(std::size_t node) const { return cls_.at(node); }
  bool inside(std::size_t node) const { return cls_[node] != NodeClass::exterior; }

  std::size_t index(int i, int j = 0) const noexcept {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(j);
  }
  std::array<int, 2> lattice(std::size_t node) const noexcept {
    return {static_cast<int>(node % n_[0]), static_cast<int>(node / n_[0])};
  }
  Vec position(std::size_t node) const noexcept {
    const auto ij = lattice(node);
    return {lo_[0] + ij[0] * h_[0], dim_ == 2 ? lo_[1] + ij[1] * h_[1] : 0.0};
  }

  /// Lattice neighbor at offset `step` along `axis`, if it exists in the lattice.
  std::optional<std::size_t> neighbor(std::size_t node, int axis, int step) const noexcept {
    auto ij = lattice(node);
    ij[axis] += step;
    if (ij[axis] < 0 || ij[axis] >= n_[axis]) return std::nullopt;
    return index(ij[0], ij[1]);
  }
  /// Neighbor at a lattice offset (di, dj), if it exists and is not exterior.
  std::optional<std::size_t> inside_offset(std::size_t node, int di, int dj) const noexcept {
    auto ij = lattice(node);
    ij[0] += di;
    ij[1] += dj;
    if (ij[0] < 0 || ij[0] >= n_[0] || ij[1] < 0 || ij[1] >= n_[1]) return std::nullopt;
    const std::size_t k = index(ij[0], ij[1]);
    if (!inside(k)) return std::nullopt;
    return k;
  }

  const std::vector<std::size_t>& interior_nodes() const noexcept { return interior_; }
  const std::vector<BoundaryNode>& boundary_nodes() const noexcept { return boundary_; }
  /// Interior and boundary nodes in index order.
  const std::vector<std::size_t>& active_nodes() const noexcept { return active_; }

  /// Position of `node` in boundary_nodes(), or npos.
  std::size_t boundary_slot(std::size_t node) const noexcept { return boundary_slot_[node]; }
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  /// Euclidean distance from the node position to the continuous boundary.
  double distance_to_boundary(std::size_t node) const noexcept {
    const Vec x = position(node);
    const auto& b = spec_.bounds;
    switch (spec_.kind) {
      case DomainKind::interval: return std::min(x[0] - b[0], b[1] - x[0]);
      case DomainKind::rectangle:
        return std::min({x[0] - b[0], b[1] - x[0], x[1] - b[2], b[3] - x[1]});
      case DomainKind::disk: return b[2] - std::hypot(x[0] - b[0], x[1] - b[1]);
    }
    return 0.0;
  }

  Vec centroid() const noexcept {
    const auto& b = spec_.bounds;
    switch (spec_.kind) {
      case DomainKind::interval: return {0.5 * (b[0] + b[1]), 0.0};
      case DomainKind::rectangle: return {0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3])};
      case DomainKind::disk: return {b[0], b[1]};
    }
    return {};
  }

  /// Active node nearest to `x` (lowest index on ties).
  std::size_t nearest_active(const Vec& x) const {
    std::size_t best = npos;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k : active_) {
      const Vec p = position(k);
      const double d = (p[0] - x[0]) * (p[0] - x[0]) + (p[1] - x[1]) * (p[1] - x[1]);
      if (d < best_d) best_d = d, best = k;
    }
    return best;
  }

  friend Grid build_grid(const DomainSpec& spec);

 private:
  DomainSpec spec_;
  int dim_ = 1;
  std::array<int, 2> n_{1, 1};
  std::array<double, 2> lo_{0.0, 0.0};
  std::array<double, 2> h_{1.0, 1.0};
  std::vector<NodeClass> cls_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> active_;
  std::vector<BoundaryNode> boundary_;
  std::vector<std::size_t> boundary_slot_;
};

inline void validate(const DomainSpec& spec) {
  const auto need = [&](std::size_t count) {
    if (spec.bounds.size() != count)
      throw ConfigError("domain.bounds needs " + std::to_string(count) + " values, got " +
                        std::to_string(spec.bounds.size()));
  };
  for (int a = 0; a < spec.dim(); ++a)
    if (spec.resolution[a] < 5)
      throw ConfigError("domain.resolution must be >= 5 per axis, got " + std::to_string(spec.resolution[a]));
  for (double v : spec.bounds)
    if (!std::isfinite(v)) throw ConfigError("domain.bounds must be finite");
  switch (spec.kind) {
    case DomainKind::interval:
      need(2);
      if (!(spec.bounds[1] > spec.bounds[0])) throw ConfigError("domain.bounds: interval has non-positive length");
      break;
    case DomainKind::rectangle:
      need(4);
      if (!(spec.bounds[1] > spec.bounds[0]) || !(spec.bounds[3] > spec.bounds[2]))
        throw ConfigError("domain.bounds: rectangle has a non-positive side");
      break;
    case DomainKind::disk:
      need(3);
      if (!(spec.bounds[2] > 0.0)) throw ConfigError("domain.bounds: disk radius must be positive");
      break;
  }
}

inline Grid build_grid(const DomainSpec& spec) {
  validate(spec);
  Grid g;
  g.spec_ = spec;
  g.dim_ = spec.dim();
  const auto& b = spec.bounds;
  switch (spec.kind) {
    case DomainKind::interval:
      g.n_ = {spec.resolution[0], 1};
      g.lo_ = {b[0], 0.0};
      g.h_ = {(b[1] - b[0]) / (spec.resolution[0] - 1), 1.0};
      break;
    case DomainKind::rectangle:
      g.n_ = spec.resolution;
      g.lo_ = {b[0], b[2]};
      g.h_ = {(b[1] - b[0]) / (spec.resolution[0] - 1), (b[3] - b[2]) / (spec.resolution[1] - 1)};
      break;
    case DomainKind::disk:
      g.n_ = spec.resolution;
      g.lo_ = {b[0] - b[2], b[1] - b[2]};
      g.h_ = {2.0 * b[2] / (spec.resolution[0] - 1), 2.0 * b[2] / (spec.resolution[1] - 1)};
      break;
  }
  const std::size_t total = static_cast<std::size_t>(g.n_[0]) * static_cast<std::size_t>(g.n_[1]);

  std::vector<bool> in(total, true);
  if (spec.kind == DomainKind::disk) {
    for (std::size_t k = 0; k < total; ++k) {
      const Vec x = g.position(k);
      const double dx = x[0] - b[0], dy = x[1] - b[1];
      in[k] = dx * dx + dy * dy < b[2] * b[2];
    }
  }

  g.cls_.assign(total, NodeClass::exterior);
  for (std::size_t k = 0; k < total; ++k) {
    if (!in[k]) continue;
    bool all_in = true;
    for (int a = 0; a < g.dim_; ++a)
      for (int s : {-1, 1}) {
        const auto nb = g.neighbor(k, a, s);
        if (!nb || !in[*nb]) all_in = false;
      }
    g.cls_[k] = all_in ? NodeClass::interior : NodeClass::boundary;
  }

  g.boundary_slot_.assign(total, Grid::npos);
  for (std::size_t k = 0; k < total; ++k) {
    if (g.cls_[k] == NodeClass::exterior) continue;
    g.active_.push_back(k);
    if (g.cls_[k] == NodeClass::interior) {
      g.interior_.push_back(k);
      continue;
    }
    BoundaryNode bn;
    bn.node = k;
    const Vec x = g.position(k);
    if (spec.kind == DomainKind::disk) {
      const double dx = b[0] - x[0], dy = b[1] - x[1];
      const double r = std::hypot(dx, dy);
      bn.normal = {dx / r, dy / r};
      const double gap = b[2] - r;
      bn.to_boundary = {-gap * bn.normal[0], -gap * bn.normal[1]};
    } else {
      // sum of face normals of every missing side; corners get the diagonal
      Vec nu{0.0, 0.0};
      for (int a = 0; a < g.dim_; ++a)
        for (int s : {-1, 1})
          if (!g.neighbor(k, a, s)) nu[a] -= s;
      const double len = std::hypot(nu[0], nu[1]);
      bn.normal = {nu[0] / len, nu[1] / len};
    }
    bn.axis = (g.dim_ == 2 && std::abs(bn.normal[1]) > std::abs(bn.normal[0])) ? 1 : 0;
    bn.dir = bn.normal[bn.axis] >= 0.0 ? 1 : -1;
    const auto inward = g.neighbor(k, bn.axis, bn.dir);
    if (!inward || !in[*inward])
      throw ConfigError("boundary node " + std::to_string(k) + " has no inward neighbor; refine the grid");
    bn.inward = *inward;
    g.boundary_slot_[k] = g.boundary_.size();
    g.boundary_.push_back(bn);
  }
  if (g.interior_.empty()) throw ConfigError("domain has no interior nodes at this resolution");

  for (auto& bn : g.boundary_) {
    Vec target = g.position(bn.node);
    target[bn.axis] += bn.dir * g.h_[bn.axis];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k : g.interior_) {
      const Vec p = g.position(k);
      const double d = (p[0] - target[0]) * (p[0] - target[0]) + (p[1] - target[1]) * (p[1] - target[1]);
      if (d < best) best = d, bn.reference = k;
    }
  }
  return g;
}

inline Vec inward_normal(const Grid& grid, std::size_t node) {
  if (node >= grid.size() || grid.boundary_slot(node) == Grid::npos)
    throw UsageError("inward_normal: node " + std::to_string(node) + " is not a boundary node");
  return grid.boundary_nodes()[grid.boundary_slot(node)].normal;
}

}  // namespace translab
