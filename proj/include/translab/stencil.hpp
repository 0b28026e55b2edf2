#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "sym_matrix.hpp"

namespace translab {

/// Nodal field plus simulation time. Exterior nodes hold NaN and are never read.
struct State {
  std::vector<double> u;
  double t = 0.0;

  static State on(const Grid& grid, double t = 0.0) {
    State s;
    s.u.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    s.t = t;
    return s;
  }

  template <class Fn>
  static State sample(const Grid& grid, Fn&& fn, double t = 0.0) {
    State s = on(grid, t);
    for (std::size_t k : grid.active_nodes()) s.u[k] = fn(grid.position(k));
    return s;
  }
};

namespace detail {

inline void require_interior(const Grid& grid, std::size_t node, const char* what) {
  if (node >= grid.size() || grid.classify(node) != NodeClass::interior)
    throw UsageError(std::string(what) + ": node " + std::to_string(node) + " is not interior");
}

inline Vec central_gradient(const Grid& grid, const std::vector<double>& u, std::size_t node) {
  Vec g{0.0, 0.0};
  for (int a = 0; a < grid.dim(); ++a) {
    const std::size_t m = *grid.neighbor(node, a, -1);
    const std::size_t p = *grid.neighbor(node, a, +1);
    g[a] = (u[p] - u[m]) / (2.0 * grid.spacing(a));
  }
  return g;
}

/// Second differences on the axes; the mixed derivative averages every
/// available one-sided quadrant stencil. With all four corners present the
/// average is exactly the central 4-corner cross stencil. Exact on quadratics.
inline SymMatrix interior_hessian(const Grid& grid, const std::vector<double>& u, std::size_t node) {
  SymMatrix hess(grid.dim());
  const double c = u[node];
  for (int a = 0; a < grid.dim(); ++a) {
    const double h = grid.spacing(a);
    hess.set(a, a, (u[*grid.neighbor(node, a, +1)] - 2.0 * c + u[*grid.neighbor(node, a, -1)]) / (h * h));
  }
  if (grid.dim() == 2) {
    double sum = 0.0;
    int count = 0;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) {
        const auto corner = grid.inside_offset(node, sx, sy);
        if (!corner) continue;
        const double ux = u[*grid.neighbor(node, 0, sx)];
        const double uy = u[*grid.neighbor(node, 1, sy)];
        sum += sx * sy * (u[*corner] - ux - uy + c);
        ++count;
      }
    if (count == 0) throw UsageError("hessian: no cross stencil available at node " + std::to_string(node));
    hess.set(0, 1, sum / (count * grid.spacing(0) * grid.spacing(1)));
  }
  return hess;
}

}  // namespace detail

/// Central-difference gradient at an interior node.
inline Vec gradient(const Grid& grid, const State& s, std::size_t node) {
  detail::require_interior(grid, node, "gradient");
  return detail::central_gradient(grid, s.u, node);
}

/// Finite-difference Hessian at an interior node.
inline SymMatrix hessian(const Grid& grid, const State& s, std::size_t node) {
  detail::require_interior(grid, node, "hessian");
  return detail::interior_hessian(grid, s.u, node);
}

}  // namespace translab
