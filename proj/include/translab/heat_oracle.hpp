#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "stencil.hpp"

namespace translab {

/// u_t = u_xx on [0, 1] with u_x(0) = alpha, u_x(1) = beta and u(x, 0) = u0(x).
struct HeatProblem {
  double alpha = 0.0;
  double beta = 1.0;
  std::function<double(double)> u0 = [](double x) { return 0.5 * x * x; };
  int n_modes = 64;
  int quadrature_intervals = 2048;  // composite Simpson, rounded up to even

  void validate() const {
    if (n_modes < 1) throw ConfigError("heat oracle needs at least one mode");
    if (quadrature_intervals < 2) throw ConfigError("heat oracle quadrature needs at least two intervals");
  }
};

/// V(x) = (beta - alpha) x^2 / 2 + alpha x: V'' = beta - alpha, V'(0) = alpha, V'(1) = beta.
inline std::function<double(double)> steady_profile(const HeatProblem& p) {
  return [a = p.alpha, b = p.beta](double x) { return 0.5 * (b - a) * x * x + a * x; };
}

/// Z(t) = (beta - alpha) t.
inline double drift(const HeatProblem& p, double t) { return (p.beta - p.alpha) * t; }

/// Cosine coefficients of u0 - V: C_0 = int (u0 - V), C_n = 2 int (u0 - V) cos(n pi x).
inline std::vector<double> fourier_coeffs(const HeatProblem& p) {
  p.validate();
  const auto v = steady_profile(p);
  const int m = p.quadrature_intervals + (p.quadrature_intervals % 2);
  const double h = 1.0 / m;
  std::vector<double> residual(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double x = i * h;
    residual[i] = p.u0(x) - v(x);
  }
  std::vector<double> c(p.n_modes + 1, 0.0);
  for (int n = 0; n <= p.n_modes; ++n) {
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * residual[i] * std::cos(n * std::numbers::pi * i * h);
    }
    c[n] = (n == 0 ? 1.0 : 2.0) * s * h / 3.0;
  }
  return c;
}

/// Truncated series solution u = (beta - alpha) t + V(x) + sum C_n e^{-n^2 pi^2 t} cos(n pi x).
class HeatOracle {
 public:
  explicit HeatOracle(HeatProblem p) : problem_(std::move(p)), coeffs_(fourier_coeffs(problem_)) {}

  const HeatProblem& problem() const noexcept { return problem_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  double operator()(double x, double t) const {
    double s = drift(problem_, t) + steady_profile(problem_)(x);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) s += coeffs_[n] * decay(n, t) * std::cos(n * std::numbers::pi * x);
    return s;
  }

  /// d/dx of the truncated series.
  double derivative(double x, double t) const {
    double s = (problem_.beta - problem_.alpha) * x + problem_.alpha;
    for (std::size_t n = 1; n < coeffs_.size(); ++n) {
      const double k = n * std::numbers::pi;
      s -= coeffs_[n] * decay(n, t) * k * std::sin(k * x);
    }
    return s;
  }

  /// Tail estimate |C_N| e^{-N^2 pi^2 t} N for the truncation at N modes.
  double truncation_bound(double t) const {
    const std::size_t n = coeffs_.size() - 1;
    return std::abs(coeffs_[n]) * decay(n, t) * static_cast<double>(n);
  }

 private:
  static double decay(std::size_t n, double t) {
    const double k = n * std::numbers::pi;
    return std::exp(-k * k * t);
  }

  HeatProblem problem_;
  std::vector<double> coeffs_;
};

inline double exact_solution(const HeatProblem& p, double x, double t) { return HeatOracle(p)(x, t); }

/// Max over active nodes of |state - oracle| at the state's time.
inline double compare(const HeatOracle& oracle, const Grid& grid, const State& s) {
  const auto& spec = grid.spec();
  if (spec.kind != DomainKind::interval || spec.bounds[0] != 0.0 || spec.bounds[1] != 1.0)
    throw UsageError("heat oracle comparison needs the interval [0, 1]");
  if (s.u.size() != grid.size()) throw UsageError("state does not live on this grid");
  double worst = 0.0;
  for (std::size_t k : grid.active_nodes())
    worst = std::max(worst, std::abs(s.u[k] - oracle(grid.position(k)[0], s.t)));
  return worst;
}

inline double compare(const HeatProblem& p, const Grid& grid, const State& s) { return compare(HeatOracle(p), grid, s); }

}  // namespace translab
