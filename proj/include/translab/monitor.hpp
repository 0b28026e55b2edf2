#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "stencil.hpp"
#include "stepper.hpp"

namespace translab {

/// Convergence thresholds and the runtime caps on sup|u_t|, max|Du|, max|D^2u|.
struct Tolerances {
  double tol_osc = 1e-6;
  double tol_speed = 1e-5;
  double obliqueness_floor = 0.1;
  double cap_ut = 1e3;
  double cap_grad = 1e3;
  double cap_hess = 1e3;

  void validate() const {
    for (double v : {tol_osc, tol_speed, obliqueness_floor, cap_ut, cap_grad, cap_hess})
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerances must be positive and finite");
  }
};

/// One checkpoint of the diagnostics. `t` is the earlier time of the lagged
/// pair, i.e. w(x, t) = u(x, t) - u(x, t + t0).
struct SeriesRow {
  double t = 0.0;
  double osc_w = 0.0;
  double speed_estimate = 0.0;
  double sup_ut_minus_speed = 0.0;
  double min_obliqueness = 0.0;
  double max_boundary_residual = 0.0;
  double sup_ut = 0.0;
  double max_grad = 0.0;
  double max_hess = 0.0;
  // not part of the CSV series
  double speed_average = 0.0;
  double min_lagged_obliqueness = 0.0;
  double min_lagged_ellipticity = 0.0;

  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

struct ConvergenceReport {
  std::vector<SeriesRow> series;
  double c_inf = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> profile;  // normalized so profile[anchor] == 0
  bool converged = false;
  std::size_t anchor = 0;
  bool monotone_osc = false;
  std::optional<std::size_t> first_osc_violation;
  bool caps_breached = false;
  double elliptic_residual = std::numeric_limits<double>::quiet_NaN();  // nodes >= 3h from the boundary
  std::optional<double> oracle_max_error;
  std::optional<std::string> error;
  double final_time = 0.0;

  friend bool operator==(const ConvergenceReport& a, const ConvergenceReport& b) {
    const auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    if (a.profile.size() != b.profile.size()) return false;
    for (std::size_t i = 0; i < a.profile.size(); ++i)
      if (!same(a.profile[i], b.profile[i])) return false;
    return a.series == b.series && same(a.c_inf, b.c_inf) && a.converged == b.converged && a.anchor == b.anchor &&
           a.monotone_osc == b.monotone_osc && a.first_osc_violation == b.first_osc_violation &&
           a.caps_breached == b.caps_breached && same(a.elliptic_residual, b.elliptic_residual) &&
           a.oracle_max_error == b.oracle_max_error && a.error == b.error && a.final_time == b.final_time;
  }
};

/// max - min of a list of values.
inline double osc(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

/// max - min over interior and boundary nodes.
inline double osc(const Grid& grid, const std::vector<double>& field) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k : grid.active_nodes()) {
    lo = std::min(lo, field[k]);
    hi = std::max(hi, field[k]);
  }
  return grid.active_nodes().empty() ? 0.0 : hi - lo;
}

namespace detail {
inline void require_lag(const State& earlier, const State& later, double t0) {
  if (earlier.u.size() != later.u.size()) throw UsageError("lagged states live on different grids");
  const double gap = later.t - earlier.t;
  if (std::abs(gap - t0) > 1e-12 * std::max(1.0, std::abs(later.t)))
    throw UsageError("states are " + std::to_string(gap) + " apart, expected lag " + std::to_string(t0));
}
}  // namespace detail

/// w = u(., t) - u(., t + t0), nodewise.
inline std::vector<double> lagged_difference(const State& at_t, const State& at_t_plus_t0, double t0) {
  detail::require_lag(at_t, at_t_plus_t0, t0);
  std::vector<double> w(at_t.u.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = at_t.u[k] - at_t_plus_t0.u[k];
  return w;
}

/// (u(x0, t + t0) - u(x0, t)) / t0 from the two newest checkpoints.
inline double speed_estimate(const CheckpointRing& ring, std::size_t x0, double t0) {
  if (ring.size() < 2) throw UsageError("speed_estimate needs two checkpoints");
  const State& a = ring.back(1);
  const State& b = ring.latest();
  detail::require_lag(a, b, t0);
  return (b.u[x0] - a.u[x0]) / t0;
}

/// Domain-averaged variant: mean over active nodes of the lagged time difference.
inline double speed_average(const Grid& grid, const CheckpointRing& ring, double t0) {
  if (ring.size() < 2) throw UsageError("speed_average needs two checkpoints");
  const State& a = ring.back(1);
  const State& b = ring.latest();
  detail::require_lag(a, b, t0);
  double s = 0.0;
  for (std::size_t k : grid.active_nodes()) s += b.u[k] - a.u[k];
  return s / (static_cast<double>(grid.active_nodes().size()) * t0);
}

struct MonotoneCheck {
  bool ok = true;
  std::optional<std::size_t> first_violation;
};

/// Nonincrease of osc_w within 1e-9 * (1 + osc_w(first)).
inline MonotoneCheck check_monotone_osc(std::span<const double> osc_series) {
  MonotoneCheck out;
  if (osc_series.size() < 2) return out;
  const double slack = 1e-9 * (1.0 + osc_series.front());
  for (std::size_t i = 1; i < osc_series.size(); ++i)
    if (osc_series[i] > osc_series[i - 1] + slack) {
      out.ok = false;
      out.first_violation = i;
      return out;
    }
  return out;
}

inline MonotoneCheck check_monotone_osc(const std::vector<SeriesRow>& series) {
  std::vector<double> v;
  v.reserve(series.size());
  for (const auto& r : series) v.push_back(r.osc_w);
  return check_monotone_osc(std::span<const double>(v));
}

/// u~(x) = u(x, T) - C T - (u(x0, T) - C T); u~(x0) == 0 exactly.
inline std::vector<double> extract_profile(const Grid& grid, const State& final_state, double c_inf, std::size_t x0) {
  std::vector<double> p(final_state.u.size(), std::numeric_limits<double>::quiet_NaN());
  const double drift = c_inf * final_state.t;
  const double anchor = final_state.u[x0] - drift;
  for (std::size_t k : grid.active_nodes()) p[k] = (final_state.u[k] - drift) - anchor;
  return p;
}

/// max |F(D^2 u~) - C| over interior nodes at distance >= min_distance from the boundary.
inline double elliptic_residual(const Grid& grid, const OperatorSpec& op, const std::vector<double>& profile,
                                double c_inf, double min_distance) {
  double worst = 0.0;
  for (std::size_t k : grid.interior_nodes()) {
    if (grid.distance_to_boundary(k) < min_distance - 1e-12) continue;
    const SymMatrix hess = detail::interior_hessian(grid, profile, k);
    worst = std::max(worst, std::abs(f_value(op, hess) - c_inf));
  }
  return worst;
}

inline bool caps_breached(const SeriesRow& r, const Tolerances& tol) {
  return !(r.sup_ut <= tol.cap_ut && r.max_grad <= tol.cap_grad && r.max_hess <= tol.cap_hess);
}

/// Converged iff the last osc_w and sup|u_t - speed| meet their tolerances,
/// obliqueness never fell below the floor and no norm cap was breached.
inline bool convergence_decision(const std::vector<SeriesRow>& series, const Tolerances& tol, bool aborted = false) {
  if (aborted || series.empty()) return false;
  for (const auto& r : series)
    if (!(r.min_obliqueness >= tol.obliqueness_floor) || caps_breached(r, tol)) return false;
  const auto& last = series.back();
  return last.osc_w <= tol.tol_osc && last.sup_ut_minus_speed <= tol.tol_speed;
}

/// Collects one SeriesRow per checkpoint; intended as the evolve() hook.
class Monitor {
 public:
  Monitor(const Grid& grid, OperatorSpec op, BoundarySpec bspec, double t0, std::optional<std::size_t> anchor = {})
      : grid_(&grid), op_(op), bspec_(std::move(bspec)), t0_(t0),
        anchor_(anchor.value_or(grid.nearest_active(grid.centroid()))) {
    if (anchor_ >= grid.size() || !grid.inside(anchor_)) throw UsageError("anchor node is not in the domain");
  }

  std::size_t anchor() const noexcept { return anchor_; }
  const std::vector<SeriesRow>& series() const noexcept { return series_; }

  void operator()(const CheckpointRing& ring) { series_.push_back(measure(ring)); }

  SeriesRow measure(const CheckpointRing& ring) const {
    const Grid& g = *grid_;
    const State& a = ring.back(1);
    const State& b = ring.latest();
    const std::vector<double> w = lagged_difference(a, b, t0_);

    SeriesRow r;
    r.t = a.t;
    r.osc_w = osc(g, w);
    r.speed_estimate = speed_estimate(ring, anchor_, t0_);
    r.speed_average = speed_average(g, ring, t0_);
    for (std::size_t k : g.active_nodes()) {
      const double ut = -w[k] / t0_;
      r.sup_ut = std::max(r.sup_ut, std::abs(ut));
      r.sup_ut_minus_speed = std::max(r.sup_ut_minus_speed, std::abs(ut - r.speed_estimate));
    }

    r.min_obliqueness = std::numeric_limits<double>::infinity();
    r.min_lagged_obliqueness = std::numeric_limits<double>::infinity();
    for (const auto& bn : g.boundary_nodes()) {
      const BoundarySite site = site_of(g, bn);
      const Vec p = boundary_gradient(g, b.u, bn);
      const Vec q = boundary_gradient(g, a.u, bn);
      r.min_obliqueness = std::min(r.min_obliqueness, std::abs(obliqueness(bspec_, p, site)));
      r.max_boundary_residual = std::max(r.max_boundary_residual, std::abs(h_value(bspec_, p, site)));
      r.max_grad = std::max(r.max_grad, std::sqrt(dot(p, p, g.dim())));
      const Vec beta = linearized_oblique_vector(bspec_, q, p, site);
      r.min_lagged_obliqueness = std::min(r.min_lagged_obliqueness, std::abs(dot(beta, site.normal, g.dim())));
    }

    r.min_lagged_ellipticity = std::numeric_limits<double>::infinity();
    for (std::size_t k : g.interior_nodes()) {
      const Vec p = detail::central_gradient(g, b.u, k);
      r.max_grad = std::max(r.max_grad, std::sqrt(dot(p, p, g.dim())));
      const SymMatrix hb = detail::interior_hessian(g, b.u, k);
      const SymMatrix ha = detail::interior_hessian(g, a.u, k);
      const Eigenvalues eb = eig_sym(hb);
      r.max_hess = std::max({r.max_hess, std::abs(eb.min()), std::abs(eb.max())});
      const SymMatrix lin = linearized_coefficients(op_, ha, hb);
      r.min_lagged_ellipticity = std::min(r.min_lagged_ellipticity, eig_sym(lin).min());
    }
    return r;
  }

 private:
  const Grid* grid_;
  OperatorSpec op_;
  BoundarySpec bspec_;
  double t0_;
  std::size_t anchor_;
  std::vector<SeriesRow> series_;
};

}  // namespace translab
