#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace translab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid domain, operator, boundary or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A function was called outside its precondition (wrong node class, misaligned times, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Hessian eigenvalues left the admissible set of the operator branch.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(const std::string& what, std::vector<double> eigenvalues, double bound,
                     std::ptrdiff_t node = -1)
      : Error(what), eigenvalues_(std::move(eigenvalues)), bound_(bound), node_(node) {}

  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  double bound() const noexcept { return bound_; }
  std::ptrdiff_t node() const noexcept { return node_; }

 private:
  std::vector<double> eigenvalues_;
  double bound_;
  std::ptrdiff_t node_;
};

/// Newton solve for a boundary value did not reach the residual tolerance.
class BoundaryEnforcementError : public Error {
 public:
  BoundaryEnforcementError(const std::string& what, std::size_t node, double residual)
      : Error(what), node_(node), residual_(residual) {}

  std::size_t node() const noexcept { return node_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t node_;
  double residual_;
};

/// The boundary condition lost obliqueness: |grad_p h . nu| fell below the degeneracy threshold.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, std::size_t node, double obliqueness)
      : Error(what), node_(node), obliqueness_(obliqueness) {}

  std::size_t node() const noexcept { return node_; }
  double obliqueness() const noexcept { return obliqueness_; }

 private:
  std::size_t node_;
  double obliqueness_;
};

}  // namespace translab
