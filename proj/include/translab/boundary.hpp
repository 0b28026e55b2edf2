#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "stencil.hpp"

namespace translab {

enum class BoundaryKind { flux1d, neumann, target_disk };

/// Oblique boundary condition h(Du, x) = 0.
///  flux1d:      u_x = alpha at the left end, u_x = beta at the right end (interval only)
///  neumann:     Du . nu = phi(x)
///  target_disk: |Du|^2 - R^2 = 0, i.e. Du maps the boundary onto the circle of radius R
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::flux1d;
  double alpha = 0.0;
  double beta = 0.0;
  std::function<double(const Vec&)> phi = [](const Vec&) { return 0.0; };
  double radius = 1.0;

  static BoundarySpec flux(double alpha, double beta) {
    BoundarySpec s;
    s.kind = BoundaryKind::flux1d;
    s.alpha = alpha;
    s.beta = beta;
    return s;
  }
  static BoundarySpec neumann(std::function<double(const Vec&)> phi) {
    BoundarySpec s;
    s.kind = BoundaryKind::neumann;
    s.phi = std::move(phi);
    return s;
  }
  static BoundarySpec target_disk(double radius) {
    if (!(radius > 0.0)) throw ConfigError("boundary.radius must be positive");
    BoundarySpec s;
    s.kind = BoundaryKind::target_disk;
    s.radius = radius;
    return s;
  }
};

/// Where h is evaluated: a point on the boundary with its inward unit normal.
struct BoundarySite {
  Vec x{};
  Vec normal{};
  int dim = 1;
};

inline double h_value(const BoundarySpec& spec, const Vec& p, const BoundarySite& site) {
  switch (spec.kind) {
    case BoundaryKind::flux1d:
      if (site.dim != 1) throw ConfigError("flux1d boundary condition applies only to interval domains");
      // inward normal +1 marks the left endpoint
      return site.normal[0] > 0.0 ? p[0] - spec.alpha : p[0] - spec.beta;
    case BoundaryKind::neumann: return dot(p, site.normal, site.dim) - spec.phi(site.x);
    case BoundaryKind::target_disk: return dot(p, p, site.dim) - spec.radius * spec.radius;
  }
  return 0.0;
}

/// grad_p h, exact.
inline Vec h_gradient(const BoundarySpec& spec, const Vec& p, const BoundarySite& site) {
  switch (spec.kind) {
    case BoundaryKind::flux1d: return {1.0, 0.0};
    case BoundaryKind::neumann: return site.normal;
    case BoundaryKind::target_disk: return {2.0 * p[0], site.dim == 2 ? 2.0 * p[1] : 0.0};
  }
  return {};
}

/// grad_p h . nu. Values near zero mean the condition is no longer oblique.
inline double obliqueness(const BoundarySpec& spec, const Vec& p, const BoundarySite& site) {
  return dot(h_gradient(spec, p, site), site.normal, site.dim);
}

/// beta^i = int_0^1 h_{p_i}(s p + (1 - s) q) ds, the oblique vector of the
/// linear condition satisfied by a lagged difference of two solutions.
inline Vec linearized_oblique_vector(const BoundarySpec& spec, const Vec& p, const Vec& q, const BoundarySite& site) {
  Vec acc{0.0, 0.0};
  for (std::size_t k = 0; k < detail::kGaussNodes.size(); ++k) {
    const double s = detail::kGaussNodes[k];
    const Vec g = h_gradient(spec, {s * p[0] + (1 - s) * q[0], s * p[1] + (1 - s) * q[1]}, site);
    acc[0] += detail::kGaussWeights[k] * g[0];
    acc[1] += detail::kGaussWeights[k] * g[1];
  }
  return acc;
}

inline BoundarySite site_of(const Grid& grid, const BoundaryNode& bn) {
  const Vec x = grid.position(bn.node);
  return {{x[0] + bn.to_boundary[0], x[1] + bn.to_boundary[1]}, bn.normal, grid.dim()};
}

namespace detail {

/// Gradient at the boundary point of `bn`, linear in the nodal values read
/// through `val`. The dominant-axis derivative is one-sided and corrected by
/// the Hessian of the reference interior node; transverse derivatives are
/// central where possible. The result is then shifted from the node to the
/// boundary point with the same Hessian, so the stencil is exact on quadratics.
template <class Values>
Vec boundary_gradient_impl(const Grid& grid, const BoundaryNode& bn, const Values& val) {
  const std::size_t b = bn.node;
  const std::size_t m = bn.reference;
  const int dim = grid.dim();

  // Hessian at the reference node, through the accessor so linearity is preserved
  SymMatrix hess(dim);
  for (int a = 0; a < dim; ++a) {
    const double h = grid.spacing(a);
    hess.set(a, a, (val(*grid.neighbor(m, a, +1)) - 2.0 * val(m) + val(*grid.neighbor(m, a, -1))) / (h * h));
  }
  if (dim == 2) {
    double sum = 0.0;
    int count = 0;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) {
        const auto corner = grid.inside_offset(m, sx, sy);
        if (!corner) continue;
        sum += sx * sy * (val(*corner) - val(*grid.neighbor(m, 0, sx)) - val(*grid.neighbor(m, 1, sy)) + val(m));
        ++count;
      }
    hess.set(0, 1, count ? sum / (count * grid.spacing(0) * grid.spacing(1)) : 0.0);
  }

  Vec p{0.0, 0.0};
  {
    const int k = bn.axis;
    const double step = bn.dir * grid.spacing(k);
    p[k] = (val(bn.inward) - val(b)) / step - 0.5 * step * hess(k, k);
  }
  if (dim == 2) {
    const int j = 1 - bn.axis;
    const double h = grid.spacing(j);
    const auto lo = grid.inside_offset(b, j == 0 ? -1 : 0, j == 1 ? -1 : 0);
    const auto hi = grid.inside_offset(b, j == 0 ? 1 : 0, j == 1 ? 1 : 0);
    if (lo && hi) {
      p[j] = (val(*hi) - val(*lo)) / (2.0 * h);
    } else if (lo || hi) {
      const double step = hi ? h : -h;
      p[j] = (val(hi ? *hi : *lo) - val(b)) / step - 0.5 * step * hess(j, j);
    } else {
      // no transverse neighbor: Taylor-transfer the reference node's central derivative
      const Vec xb = grid.position(b), xm = grid.position(m);
      const double central = (val(*grid.neighbor(m, j, 1)) - val(*grid.neighbor(m, j, -1))) / (2.0 * h);
      p[j] = central + hess(j, 0) * (xb[0] - xm[0]) + hess(j, 1) * (xb[1] - xm[1]);
    }
  }
  for (int a = 0; a < dim; ++a)
    for (int c = 0; c < dim; ++c) p[a] += hess(a, c) * bn.to_boundary[c];
  return p;
}

}  // namespace detail

/// Discrete Du at the boundary point of boundary node `bn`.
inline Vec boundary_gradient(const Grid& grid, const std::vector<double>& u, const BoundaryNode& bn) {
  return detail::boundary_gradient_impl(grid, bn, [&](std::size_t k) { return u[k]; });
}

/// Tolerances for enforce().
struct EnforceOptions {
  double tolerance = 1e-10;      // max |h| after enforcement
  int newton_iterations = 50;    // per node and pass
  int max_passes = 1000;         // Jacobi passes over all boundary nodes
  double degeneracy = 1e-8;      // |grad_p h . nu| below this aborts
};

/// |h(Du, x)| at every boundary node, measured with the enforcement stencil.
inline std::vector<double> boundary_residuals(const BoundarySpec& spec, const Grid& grid, const std::vector<double>& u) {
  std::vector<double> r;
  r.reserve(grid.boundary_nodes().size());
  for (const auto& bn : grid.boundary_nodes())
    r.push_back(std::abs(h_value(spec, boundary_gradient(grid, u, bn), site_of(grid, bn))));
  return r;
}

namespace detail {

inline double solve_node(const BoundarySpec& spec, const Grid& grid, const std::vector<double>& u,
                         const BoundaryNode& bn, const EnforceOptions& opt) {
  const BoundarySite site = site_of(grid, bn);
  const double v0 = u[bn.node];
  const Vec p0 = boundary_gradient(grid, u, bn);
  // exact sensitivity of the gradient to this node's value (the stencil is linear)
  const Vec g = boundary_gradient_impl(grid, bn, [&](std::size_t k) { return k == bn.node ? 1.0 : 0.0; });

  double v = v0;
  for (int it = 0; it < opt.newton_iterations; ++it) {
    const Vec p{p0[0] + g[0] * (v - v0), p0[1] + g[1] * (v - v0)};
    const double r = h_value(spec, p, site);
    if (std::abs(r) <= 0.01 * opt.tolerance) return v;
    const double obl = obliqueness(spec, p, site);
    if (!(std::abs(obl) > opt.degeneracy))
      throw DegeneracyError("boundary condition degenerate at node " + std::to_string(bn.node) +
                                " (obliqueness " + std::to_string(obl) + ")",
                            bn.node, std::abs(obl));
    const double slope = dot(h_gradient(spec, p, site), g, site.dim);
    if (slope == 0.0)
      throw DegeneracyError("boundary value does not influence h at node " + std::to_string(bn.node), bn.node,
                            std::abs(obl));
    const double next = v - r / slope;
    if (!std::isfinite(next)) break;
    if (std::abs(next - v) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v))) {
      v = next;
      const Vec pn{p0[0] + g[0] * (v - v0), p0[1] + g[1] * (v - v0)};
      if (std::abs(h_value(spec, pn, site)) <= opt.tolerance) return v;
      break;
    }
    v = next;
  }
  const Vec p{p0[0] + g[0] * (v - v0), p0[1] + g[1] * (v - v0)};
  const double r = std::abs(h_value(spec, p, site));
  throw BoundaryEnforcementError("Newton solve for boundary node " + std::to_string(bn.node) +
                                     " did not converge (residual " + std::to_string(r) + ")",
                                 bn.node, r);
}

}  // namespace detail

/// Adjusts boundary node values until |h(Du, x)| <= tolerance at every
/// boundary node. Each pass solves every node independently against the
/// values of the previous pass (Jacobi), so the result does not depend on
/// node order; passes repeat until the coupled residual is met.
inline State enforce(const BoundarySpec& spec, const Grid& grid, State s, const EnforceOptions& opt = {}) {
  if (spec.kind == BoundaryKind::flux1d && grid.dim() != 1)
    throw ConfigError("flux1d boundary condition applies only to interval domains");
  for (std::size_t k : grid.active_nodes())
    if (!std::isfinite(s.u[k])) throw UsageError("enforce: non-finite value at node " + std::to_string(k));

  const auto& nodes = grid.boundary_nodes();
  auto worst = [&](const std::vector<double>& u) {
    std::size_t at = 0;
    double r = 0.0;
    const auto res = boundary_residuals(spec, grid, u);
    for (std::size_t i = 0; i < res.size(); ++i)
      if (!(res[i] <= r)) r = res[i], at = i;
    return std::pair{at, r};
  };

  auto [at, r] = worst(s.u);
  std::vector<double> next = s.u;
  for (int pass = 0; r > opt.tolerance && pass < opt.max_passes; ++pass) {
    for (const auto& bn : nodes) next[bn.node] = detail::solve_node(spec, grid, s.u, bn, opt);
    for (const auto& bn : nodes) s.u[bn.node] = next[bn.node];
    std::tie(at, r) = worst(s.u);
  }
  if (r > opt.tolerance)
    throw BoundaryEnforcementError("boundary enforcement did not converge (residual " + std::to_string(r) +
                                       " at node " + std::to_string(nodes[at].node) + ")",
                                   nodes[at].node, r);
  return s;
}

}  // namespace translab
