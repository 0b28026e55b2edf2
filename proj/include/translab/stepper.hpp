#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "stencil.hpp"

namespace translab {

struct StepConfig {
  double dt_safety = 0.9;
  double t_end = 1.0;
  double t0 = 1.0 / 16.0;  // checkpoint spacing and comparison lag

  void validate() const {
    if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw ConfigError("time.dt_safety must lie in (0, 1]");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("time.t_end must be positive");
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw ConfigError("time.t0 must be positive");
  }

  /// Number of checkpoints k * t0 needed to reach t_end.
  std::int64_t checkpoints() const {
    return static_cast<std::int64_t>(std::ceil(t_end / t0 - 1e-9));
  }
};

/// Explicit-Euler step bound dt_safety * h_min^2 / (2 n Lambda), Lambda the largest
/// eigenvalue of dF/d(D^2u) over interior nodes, rounded down so t0 / dt is an integer.
inline double cfl_dt(const Grid& grid, const State& s, const OperatorSpec& op, const StepConfig& cfg) {
  double lambda = 0.0;
  for (std::size_t k : grid.interior_nodes()) {
    const SymMatrix hess = detail::interior_hessian(grid, s.u, k);
    const Eigenvalues eig = eig_sym(hess);
    if (!domain_check(op, eig)) detail::throw_inadmissible(op, eig, static_cast<std::ptrdiff_t>(k));
    lambda = std::max(lambda, max_ellipticity(op, eig));
  }
  if (!std::isfinite(lambda) || !(lambda > 0.0))
    throw AdmissibilityError("CFL bound undefined: operator derivative spectrum is " + std::to_string(lambda), {},
                             lambda);
  const double h = grid.min_spacing();
  const double raw = cfg.dt_safety * h * h / (2.0 * grid.dim() * lambda);
  const double substeps = std::ceil(cfg.t0 / raw);
  return cfg.t0 / substeps;
}

/// F(D^2u, Du, x) at every interior node (zero elsewhere).
inline std::vector<double> operator_field(const Grid& grid, const State& s, const OperatorSpec& op) {
  std::vector<double> f(grid.size(), 0.0);
  for (std::size_t k : grid.interior_nodes()) {
    const SymMatrix hess = detail::interior_hessian(grid, s.u, k);
    if (op.branch() == Branch::trace) {
      f[k] = hess.trace();
    } else {
      f[k] = f_value(op, eig_sym(hess), static_cast<std::ptrdiff_t>(k));
    }
  }
  return f;
}

/// u <- u + dt F at interior nodes from the old state, then boundary enforcement.
inline State step(const Grid& grid, const State& s, const OperatorSpec& op, const BoundarySpec& bspec, double dt,
                  const EnforceOptions& opt = {}) {
  const std::vector<double> f = operator_field(grid, s, op);
  State next = s;
  for (std::size_t k : grid.interior_nodes()) next.u[k] = s.u[k] + dt * f[k];
  next.t = s.t + dt;
  return enforce(bspec, grid, std::move(next), opt);
}

/// The most recent checkpoint states, oldest first.
class CheckpointRing {
 public:
  explicit CheckpointRing(std::size_t capacity = 4) : capacity_(capacity < 2 ? 2 : capacity) {}

  void push(State s) {
    states_.push_back(std::move(s));
    if (states_.size() > capacity_) states_.pop_front();
    ++delivered_;
  }
  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  /// Checkpoints pushed so far, including evicted ones.
  std::size_t delivered() const noexcept { return delivered_; }

  const State& latest() const {
    if (states_.empty()) throw UsageError("checkpoint ring is empty");
    return states_.back();
  }
  /// State `lag` checkpoints before the latest one.
  const State& back(std::size_t lag) const {
    if (lag >= states_.size()) throw UsageError("checkpoint " + std::to_string(lag) + " steps back is not retained");
    return states_[states_.size() - 1 - lag];
  }

 private:
  std::size_t capacity_;
  std::deque<State> states_;
  std::size_t delivered_ = 0;
};

using MonitorHook = std::function<void(const CheckpointRing&)>;

struct EvolveResult {
  State final_state;
  CheckpointRing ring;
  std::int64_t steps = 0;
};

/// Enforces the boundary on u0, then steps to the first checkpoint k * t0 >= t_end.
/// The hook sees the ring after every checkpoint k = 1..K; the initial state is
/// checkpoint 0 and is in the ring but not delivered to the hook.
inline EvolveResult evolve(const Grid& grid, const State& u0, const OperatorSpec& op, const BoundarySpec& bspec,
                           const StepConfig& cfg, const MonitorHook& hook = {}, const EnforceOptions& opt = {}) {
  cfg.validate();
  for (std::size_t k : grid.active_nodes())
    if (!std::isfinite(u0.u[k])) throw UsageError("evolve: initial state is not finite at node " + std::to_string(k));

  EvolveResult out{enforce(bspec, grid, u0, opt), CheckpointRing(4), 0};
  State& s = out.final_state;
  s.t = 0.0;
  out.ring.push(s);
  const std::int64_t total = cfg.checkpoints();
  for (std::int64_t k = 1; k <= total; ++k) {
    const double dt = cfl_dt(grid, s, op, cfg);
    const auto substeps = static_cast<std::int64_t>(std::llround(cfg.t0 / dt));
    const double start = static_cast<double>(k - 1) * cfg.t0;
    for (std::int64_t j = 1; j <= substeps; ++j) {
      s = step(grid, s, op, bspec, dt, opt);
      s.t = start + static_cast<double>(j) * dt;
      ++out.steps;
    }
    s.t = static_cast<double>(k) * cfg.t0;
    out.ring.push(s);
    if (hook) hook(out.ring);
  }
  return out;
}

}  // namespace translab
