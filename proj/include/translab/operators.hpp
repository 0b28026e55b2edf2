#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "sym_matrix.hpp"

namespace translab {

enum class OperatorFamily { trace, tau };

/// Branches of the special Lagrangian family F_tau plus the trace (heat) operator.
enum class Branch {
  trace,         // sum lambda
  log_det,       // tau = 0:            sum ln lambda
  log_ratio,     // 0 < tau < pi/4:     sum ln((lambda+a-b)/(lambda+a+b))
  inverse,       // tau = pi/4:         -sum 1/(1+lambda)
  arctan_ratio,  // pi/4 < tau < pi/2:  sum arctan((lambda+a-b)/(lambda+a+b))
  arctan,        // tau = pi/2:         sum arctan lambda
};

inline std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::trace: return "trace";
    case Branch::log_det: return "log_det";
    case Branch::log_ratio: return "log_ratio";
    case Branch::inverse: return "inverse";
    case Branch::arctan_ratio: return "arctan_ratio";
    case Branch::arctan: return "arctan";
  }
  return "?";
}

/// Parabolic operator selection. a = cot(tau), b = sqrt|cot^2(tau) - 1| are
/// cached at construction; the endpoints 0, pi/4, pi/2 select their exact
/// special-case formulas.
class OperatorSpec {
 public:
  static OperatorSpec trace() { return OperatorSpec(); }

  static OperatorSpec tau_family(double tau) {
    constexpr double quarter = std::numbers::pi / 4.0;
    constexpr double half = std::numbers::pi / 2.0;
    if (!(tau >= 0.0 && tau <= half)) throw ConfigError("operator.tau must lie in [0, pi/2], got " + std::to_string(tau));
    OperatorSpec s;
    s.family_ = OperatorFamily::tau;
    s.tau_ = tau;
    if (tau == 0.0) {
      s.branch_ = Branch::log_det;
    } else if (tau == quarter) {
      s.branch_ = Branch::inverse;
    } else if (tau == half) {
      s.branch_ = Branch::arctan;
    } else {
      s.a_ = 1.0 / std::tan(tau);
      s.b_ = std::sqrt(std::abs(s.a_ * s.a_ - 1.0));
      s.branch_ = tau < quarter ? Branch::log_ratio : Branch::arctan_ratio;
    }
    return s;
  }

  OperatorFamily family() const noexcept { return family_; }
  Branch branch() const noexcept { return branch_; }
  double tau() const noexcept { return tau_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// Eigenvalues must stay strictly above this bound (-inf when unrestricted).
  double lower_bound() const noexcept {
    switch (branch_) {
      case Branch::log_det: return 0.0;
      case Branch::log_ratio: return -(a_ - b_);
      case Branch::inverse: return -1.0;
      case Branch::arctan_ratio: return -(a_ + b_);
      default: return -std::numeric_limits<double>::infinity();
    }
  }

  /// Scalar profile f with F(A) = sum f(lambda_i).
  double f(double l) const noexcept {
    switch (branch_) {
      case Branch::trace: return l;
      case Branch::log_det: return std::log(l);
      case Branch::log_ratio: return std::log((l + a_ - b_) / (l + a_ + b_));
      case Branch::inverse: return -1.0 / (1.0 + l);
      case Branch::arctan_ratio: return std::atan((l + a_ - b_) / (l + a_ + b_));
      case Branch::arctan: return std::atan(l);
    }
    return 0.0;
  }

  /// f'(lambda), strictly positive on the admissible set.
  double f_prime(double l) const noexcept {
    switch (branch_) {
      case Branch::trace: return 1.0;
      case Branch::log_det: return 1.0 / l;
      case Branch::log_ratio: {
        const double s = l + a_;
        return 2.0 * b_ / ((s - b_) * (s + b_));
      }
      case Branch::inverse: return 1.0 / ((1.0 + l) * (1.0 + l));
      case Branch::arctan_ratio: {
        // d/dl arctan((s-b)/(s+b)) with s = l + a simplifies to b / (s^2 + b^2)
        const double s = l + a_;
        return b_ / (s * s + b_ * b_);
      }
      case Branch::arctan: return 1.0 / (1.0 + l * l);
    }
    return 0.0;
  }

  friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;

 private:
  OperatorFamily family_ = OperatorFamily::trace;
  Branch branch_ = Branch::trace;
  double tau_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
};

/// Parses tau given as a decimal or one of the literals "0", "pi/6", "pi/4", "pi/3", "pi/2".
inline double parse_tau(std::string_view text) {
  constexpr double pi = std::numbers::pi;
  if (text == "0") return 0.0;
  if (text == "pi/6") return pi / 6.0;
  if (text == "pi/4") return pi / 4.0;
  if (text == "pi/3") return pi / 3.0;
  if (text == "pi/2") return pi / 2.0;
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("cannot parse tau literal '" + s + "'");
  return v;
}

inline bool domain_check(const OperatorSpec& spec, const Eigenvalues& lam) {
  const double bound = spec.lower_bound();
  for (int i = 0; i < lam.n; ++i)
    if (!(lam.values[i] > bound)) return false;
  return true;
}

namespace detail {

[[noreturn]] inline void throw_inadmissible(const OperatorSpec& spec, const Eigenvalues& lam, std::ptrdiff_t node) {
  std::vector<double> vals(lam.values.begin(), lam.values.begin() + lam.n);
  std::string msg = "eigenvalue " + std::to_string(lam.min()) + " outside admissible set of branch " +
                    std::string(to_string(spec.branch())) + " (lambda > " + std::to_string(spec.lower_bound()) + ")";
  if (node >= 0) msg += " at node " + std::to_string(node);
  throw AdmissibilityError(msg, std::move(vals), spec.lower_bound(), node);
}

}  // namespace detail

inline double f_value(const OperatorSpec& spec, const Eigenvalues& lam, std::ptrdiff_t node = -1) {
  if (!domain_check(spec, lam)) detail::throw_inadmissible(spec, lam, node);
  double s = 0.0;
  for (int i = 0; i < lam.n; ++i) s += spec.f(lam.values[i]);
  return s;
}

inline double f_value(const OperatorSpec& spec, const SymMatrix& a) {
  if (spec.branch() == Branch::trace) return a.trace();
  return f_value(spec, eig_sym(a));
}

/// [a^{ij}] = dF/d(D^2 u), assembled spectrally as Q diag(f'(lambda)) Q^T.
inline SymMatrix f_derivative(const OperatorSpec& spec, const SymMatrix& a) {
  if (spec.branch() == Branch::trace) return SymMatrix::identity(a.dim());
  const Eigenvalues lam = eig_sym(a);
  if (!domain_check(spec, lam)) detail::throw_inadmissible(spec, lam, -1);
  return lam.assemble([&](double l) { return spec.f_prime(l); });
}

/// Largest eigenvalue of f_derivative, i.e. max_i f'(lambda_i).
inline double max_ellipticity(const OperatorSpec& spec, const Eigenvalues& lam) {
  double m = 0.0;
  for (int i = 0; i < lam.n; ++i) m = std::max(m, spec.f_prime(lam.values[i]));
  return m;
}

/// General F(D^2u, Du, x) entry point. No shipped operator reads Du or x.
inline double evaluate(const OperatorSpec& spec, const SymMatrix& hessian, std::span<const double> /*gradient*/,
                       std::span<const double> /*x*/) {
  return f_value(spec, hessian);
}

namespace detail {
// 5-point Gauss-Legendre mapped to [0, 1]
inline constexpr double kGl1 = 0.9061798459386640, kGl2 = 0.5384693101056831;
inline constexpr double kGw0 = 0.5688888888888889, kGw1 = 0.2369268850561891, kGw2 = 0.4786286704993665;
inline constexpr std::array<double, 5> kGaussNodes{0.5 - 0.5 * kGl1, 0.5 - 0.5 * kGl2, 0.5, 0.5 + 0.5 * kGl2,
                                                   0.5 + 0.5 * kGl1};
inline constexpr std::array<double, 5> kGaussWeights{0.5 * kGw1, 0.5 * kGw2, 0.5 * kGw0, 0.5 * kGw2, 0.5 * kGw1};
}  // namespace detail

/// Frozen-coefficient linearization between two Hessians:
/// a^{ij} = int_0^1 F^{ij}(s A + (1-s) B) ds, so that F(A) - F(B) = <a, A - B>.
inline SymMatrix linearized_coefficients(const OperatorSpec& spec, const SymMatrix& a, const SymMatrix& b) {
  SymMatrix acc(a.dim());
  for (std::size_t q = 0; q < detail::kGaussNodes.size(); ++q) {
    const double s = detail::kGaussNodes[q];
    acc = acc + detail::kGaussWeights[q] * f_derivative(spec, s * a + (1.0 - s) * b);
  }
  return acc;
}

}  // namespace translab
