#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace translab;

namespace {

double char_poly(const SymMatrix& a, double l) {
  const double m00 = a(0, 0) - l, m11 = a(1, 1) - l, m22 = a(2, 2) - l;
  const double m01 = a(0, 1), m02 = a(0, 2), m12 = a(1, 2);
  return m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) + m02 * (m01 * m12 - m11 * m02);
}

// Roots of det(A - l I) by scanning for sign changes and bisecting.
std::vector<double> cubic_roots(const SymMatrix& a) {
  double bound = 0.0;
  for (int i = 0; i < 3; ++i) {
    double r = 0.0;
    for (int j = 0; j < 3; ++j) r += std::abs(a(i, j));
    bound = std::max(bound, r);
  }
  bound += 1e-3;
  std::vector<double> roots;
  const int samples = 20000;
  double x0 = -bound, f0 = char_poly(a, x0);
  for (int k = 1; k <= samples; ++k) {
    const double x1 = -bound + 2.0 * bound * k / samples, f1 = char_poly(a, x1);
    if (f0 == 0.0) roots.push_back(x0);
    else if (f0 * f1 < 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi), fm = char_poly(a, mid);
        if ((fm < 0) == (flo < 0)) lo = mid, flo = fm;
        else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1, f0 = f1;
  }
  return roots;
}

double max_diff(const SymMatrix& a, const SymMatrix& b) { return (a - b).max_abs(); }

double orthogonality_error(const Eigenvalues& e) {
  double worst = 0.0;
  for (int i = 0; i < e.n; ++i)
    for (int j = 0; j < e.n; ++j) {
      double s = 0.0;
      for (int k = 0; k < e.n; ++k) s += e.frame[k][i] * e.frame[k][j];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST(SymMatrix, StoresUpperTriangleSymmetrically) {
  SymMatrix m(3);
  m.set(2, 0, 4.0);
  EXPECT_EQ(m(0, 2), 4.0);
  EXPECT_EQ(m(2, 0), 4.0);
  EXPECT_EQ(SymMatrix::identity(3, 2.0).trace(), 6.0);
  EXPECT_DOUBLE_EQ(SymMatrix::diagonal({2.0, 3.0, 4.0}).determinant(), 24.0);
}

TEST(EigSym, TwoByTwoRankOneShift) {
  SymMatrix m(2);
  m.set(0, 0, 2), m.set(0, 1, 1), m.set(1, 1, 2);
  const auto e = eig_sym(m);
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 3.0, 1e-15);
}

TEST(EigSym, DiagonalIsSorted) {
  const auto e = eig_sym(SymMatrix::diagonal({3, 1, 2}));
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 2.0, 1e-15);
  EXPECT_NEAR(e.values[2], 3.0, 1e-15);
}

TEST(EigSym, OneByOne) {
  const auto e = eig_sym(SymMatrix::diagonal({-2.5}));
  EXPECT_EQ(e.n, 1);
  EXPECT_EQ(e.values[0], -2.5);
  EXPECT_EQ(e.frame[0][0], 1.0);
}

TEST(EigSym, RandomThreeByThreeMatchesCharacteristicRoots) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SymMatrix a = support::random_symmetric(rng, 3);
    const auto roots = cubic_roots(a);
    if (roots.size() != 3) continue;  // near-double root slipped between samples
    const auto e = eig_sym(a);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(e.values[k], roots[k], 1e-9) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 280);
}

TEST(EigSym, ReconstructionAndInvariants) {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 2000; ++trial) {
      const SymMatrix a = support::random_symmetric(rng, n, 3.0);
      const auto e = eig_sym(a);
      ASSERT_LE(max_diff(e.reconstruct(), a), 1e-12);
      ASSERT_LE(orthogonality_error(e), 1e-12);
      for (int k = 1; k < n; ++k) ASSERT_LE(e.values[k - 1], e.values[k]);
      double sum = 0.0, prod = 1.0;
      for (int k = 0; k < n; ++k) sum += e.values[k], prod *= e.values[k];
      ASSERT_NEAR(sum, a.trace(), 1e-10 * std::max(1.0, std::abs(a.trace())));
      ASSERT_NEAR(prod, a.determinant(), 1e-10 * std::max(1.0, std::abs(a.determinant())));
    }
}

TEST(EigSym, ClusteredSpectraStayAccurate) {
  std::mt19937_64 rng(13);
  const std::vector<std::vector<double>> spectra{
      {1.0, 1.0, 1.0}, {1.0, 1.0, 2.0}, {-1.0, 3.0, 3.0}, {1.0, 1.0 + 1e-13, 2.0}, {0.0, 0.0, 0.0}, {5.0, 5.0 + 1e-9, 5.0 + 2e-9}};
  for (const auto& s : spectra)
    for (int trial = 0; trial < 200; ++trial) {
      const SymMatrix a = support::with_spectrum(rng, s);
      const auto e = eig_sym(a);
      ASSERT_LE(max_diff(e.reconstruct(), a), 1e-12);
      ASSERT_LE(orthogonality_error(e), 1e-12);
      for (int k = 0; k < 3; ++k) ASSERT_NEAR(e.values[k], s[k], 1e-12);
    }
}

TEST(EigSym, JacobiAgreesWithClosedForm) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 500; ++trial) {
    const SymMatrix a = support::random_symmetric(rng, 3);
    const auto c = eig_sym(a);
    const auto j = detail::jacobi_eig(a);
    for (int k = 0; k < 3; ++k) ASSERT_NEAR(c.values[k], j.values[k], 1e-12);
  }
}

TEST(EigSym, AssembleAppliesFunctionPerEigenvalue) {
  std::mt19937_64 rng(15);
  const SymMatrix a = support::with_spectrum(rng, {1.0, 2.0, 4.0});
  const SymMatrix inv = eig_sym(a).assemble([](double l) { return 1.0 / l; });
  // A * A^{-1} = I
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * inv(k, j);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-13);
    }
}
