#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <numbers>

namespace translab {

/// Real symmetric matrix of dimension 1..3. Only the upper triangle is stored,
/// so symmetry holds by construction.
class SymMatrix {
 public:
  static constexpr int kMaxDim = 3;

  constexpr SymMatrix() = default;
  constexpr explicit SymMatrix(int n) : n_(n) { assert(n >= 1 && n <= kMaxDim); }

  static constexpr SymMatrix identity(int n, double scale = 1.0) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, scale);
    return m;
  }

  static constexpr SymMatrix diagonal(std::initializer_list<double> d) {
    SymMatrix m(static_cast<int>(d.size()));
    int i = 0;
    for (double v : d) m.set(i, i, v), ++i;
    return m;
  }

  constexpr int dim() const noexcept { return n_; }

  constexpr double operator()(int i, int j) const noexcept { return data_[slot(i, j)]; }
  constexpr void set(int i, int j, double v) noexcept { data_[slot(i, j)] = v; }

  constexpr double trace() const noexcept {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  constexpr double determinant() const noexcept {
    const auto& a = *this;
    switch (n_) {
      case 1: return a(0, 0);
      case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
      default:
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2)) -
               a(0, 1) * (a(0, 1) * a(2, 2) - a(1, 2) * a(0, 2)) +
               a(0, 2) * (a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2));
    }
  }

  /// Largest absolute entry.
  constexpr double max_abs() const noexcept {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }

  /// Frobenius inner product <A, B> = sum_ij A_ij B_ij.
  friend constexpr double inner(const SymMatrix& a, const SymMatrix& b) noexcept {
    double s = 0.0;
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) s += a(i, j) * b(i, j);
    return s;
  }

  friend constexpr SymMatrix operator+(SymMatrix a, const SymMatrix& b) noexcept {
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend constexpr SymMatrix operator-(SymMatrix a, const SymMatrix& b) noexcept {
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend constexpr SymMatrix operator*(double s, SymMatrix a) noexcept {
    for (auto& v : a.data_) v *= s;
    return a;
  }

 private:
  static constexpr int slot(int i, int j) noexcept {
    if (i > j) std::swap(i, j);
    // row-major upper triangle of a 3x3: (0,0)(0,1)(0,2)(1,1)(1,2)(2,2)
    constexpr std::array<int, 3> row_start{0, 3, 5};
    return row_start[i] + (j - i);
  }

  int n_ = 1;
  std::array<double, 6> data_{};
};

/// Sorted eigenvalues (ascending) and the orthogonal frame whose columns are
/// the matching unit eigenvectors: A = Q diag(values) Q^T.
struct Eigenvalues {
  int n = 1;
  std::array<double, 3> values{};
  std::array<std::array<double, 3>, 3> frame{};  // frame[row][col]

  double min() const noexcept { return values[0]; }
  double max() const noexcept { return values[n - 1]; }

  /// Q diag(d) Q^T for a per-eigenvalue diagonal d.
  template <class Fn>
  SymMatrix assemble(Fn&& per_eigenvalue) const {
    SymMatrix out(n);
    std::array<double, 3> d{};
    for (int k = 0; k < n; ++k) d[k] = per_eigenvalue(values[k]);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += frame[i][k] * d[k] * frame[j][k];
        out.set(i, j, s);
      }
    return out;
  }

  SymMatrix reconstruct() const {
    return assemble([](double l) { return l; });
  }
};

namespace detail {

inline void sort_eigenpairs(Eigenvalues& e) {
  for (int i = 1; i < e.n; ++i)
    for (int j = i; j > 0 && e.values[j - 1] > e.values[j]; --j) {
      std::swap(e.values[j - 1], e.values[j]);
      for (int r = 0; r < e.n; ++r) std::swap(e.frame[r][j - 1], e.frame[r][j]);
    }
}

/// Cyclic Jacobi rotations; slow but unconditionally accurate.
inline Eigenvalues jacobi_eig(const SymMatrix& m) {
  const int n = m.dim();
  std::array<std::array<double, 3>, 3> a{};
  Eigenvalues e;
  e.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
    e.frame[i][i] = 1.0;
  }
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off == 0.0) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = e.frame[k][p], vkq = e.frame[k][q];
          e.frame[k][p] = c * vkp - s * vkq;
          e.frame[k][q] = s * vkp + c * vkq;
        }
      }
  }
  for (int i = 0; i < n; ++i) e.values[i] = a[i][i];
  sort_eigenpairs(e);
  return e;
}

inline std::array<double, 3> cross(const std::array<double, 3>& x, const std::array<double, 3>& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

inline double norm2(const std::array<double, 3>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }

/// Null vector of (A - lambda I) from the best-conditioned cross product of its rows.
inline std::array<double, 3> kernel_vector(const SymMatrix& a, double lambda) {
  std::array<std::array<double, 3>, 3> r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a(i, j) - (i == j ? lambda : 0.0);
  std::array<std::array<double, 3>, 3> c{cross(r[0], r[1]), cross(r[0], r[2]), cross(r[1], r[2])};
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (norm2(c[k]) > norm2(c[best])) best = k;
  const double len = std::sqrt(norm2(c[best]));
  if (len == 0.0) return {0.0, 0.0, 0.0};
  return {c[best][0] / len, c[best][1] / len, c[best][2] / len};
}

inline Eigenvalues closed_form_eig3(const SymMatrix& a) {
  Eigenvalues e;
  e.n = 3;
  const double q = a.trace() / 3.0;
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) {
    for (int i = 0; i < 3; ++i) e.values[i] = q, e.frame[i][i] = 1.0;
    return e;
  }
  const SymMatrix b = (1.0 / p) * (a - SymMatrix::identity(3, q));
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double mid = 3.0 * q - hi - lo;
  e.values = {lo, mid, hi};

  const auto v_lo = kernel_vector(a, lo);
  const auto v_hi = kernel_vector(a, hi);
  const auto v_mid = cross(v_hi, v_lo);
  for (int i = 0; i < 3; ++i) {
    e.frame[i][0] = v_lo[i];
    e.frame[i][1] = v_mid[i];
    e.frame[i][2] = v_hi[i];
  }
  return e;
}

}  // namespace detail

/// Symmetric eigendecomposition for n <= 3. n = 2 is closed form; n = 3 uses
/// the trigonometric solution of the characteristic cubic and falls back to
/// Jacobi rotations when eigenvalues cluster or the frame fails validation.
inline Eigenvalues eig_sym(const SymMatrix& a) {
  Eigenvalues e;
  e.n = a.dim();
  if (e.n == 1) {
    e.values[0] = a(0, 0);
    e.frame[0][0] = 1.0;
    return e;
  }
  if (e.n == 2) {
    const double mean = 0.5 * (a(0, 0) + a(1, 1));
    const double half_diff = 0.5 * (a(0, 0) - a(1, 1));
    const double radius = std::hypot(half_diff, a(0, 1));
    const double theta = 0.5 * std::atan2(a(0, 1), half_diff);
    const double c = std::cos(theta), s = std::sin(theta);
    e.values = {mean - radius, mean + radius, 0.0};
    // larger eigenvalue along (c, s), smaller along (-s, c)
    e.frame[0][0] = -s;
    e.frame[1][0] = c;
    e.frame[0][1] = c;
    e.frame[1][1] = s;
    return e;
  }

  const double scale = std::max(a.max_abs(), 1e-300);
  Eigenvalues cf = detail::closed_form_eig3(a);
  const double gap = std::min(cf.values[1] - cf.values[0], cf.values[2] - cf.values[1]);
  bool ok = gap > 1e-12 * scale;
  if (ok) {
    double orth = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double d = 0.0;
        for (int k = 0; k < 3; ++k) d += cf.frame[k][i] * cf.frame[k][j];
        orth = std::max(orth, std::abs(d - (i == j ? 1.0 : 0.0)));
      }
    const double recon = (cf.reconstruct() - a).max_abs();
    ok = orth <= 1e-13 && recon <= 1e-14 * scale;
  }
  return ok ? cf : detail::jacobi_eig(a);
}

}  // namespace translab
