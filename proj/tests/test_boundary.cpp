#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace translab;

namespace {
BoundarySite site2(Vec x, Vec nu) { return {x, nu, 2}; }
BoundarySite left_end() { return {{0.0, 0.0}, {1.0, 0.0}, 1}; }
BoundarySite right_end() { return {{1.0, 0.0}, {-1.0, 0.0}, 1}; }
Grid unit_disk(int n) { return build_grid({DomainKind::disk, {0, 0, 1}, {n, n}}); }
Grid line(int n) { return build_grid({DomainKind::interval, {0, 1}, {n, n}}); }
double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

TEST(HValue, SpecExamples) {
  const auto disk = BoundarySpec::target_disk(1.0);
  EXPECT_EQ(h_value(disk, {1.0, 0.0}, site2({1, 0}, {-1, 0})), 0.0);
  EXPECT_EQ(h_value(disk, {0.5, 0.5}, site2({1, 0}, {-1, 0})), -0.5);
  const auto flux = BoundarySpec::flux(0.0, 1.0);
  EXPECT_EQ(h_value(flux, {1.0, 0.0}, right_end()), 0.0);
  EXPECT_EQ(h_value(flux, {0.25, 0.0}, left_end()), 0.25);
}

TEST(HValue, NeumannUsesPhiAtTheSite) {
  const auto n = BoundarySpec::neumann([](const Vec& x) { return x[1]; });
  EXPECT_DOUBLE_EQ(h_value(n, {2.0, 3.0}, site2({0.0, 0.5}, {1.0, 0.0})), 1.5);
}

TEST(HValue, FluxOnPlanarDomainIsAConfigError) {
  EXPECT_THROW(h_value(BoundarySpec::flux(0, 1), {0, 0}, site2({0, 0}, {1, 0})), ConfigError);
  const Grid g = build_grid({DomainKind::rectangle, {0, 1, 0, 1}, {6, 6}});
  EXPECT_THROW(enforce(BoundarySpec::flux(0, 1), g, State::sample(g, [](const Vec&) { return 0.0; })), ConfigError);
}

TEST(HGradient, SpecExamples) {
  const Vec g = h_gradient(BoundarySpec::target_disk(1.0), {1.0, 0.0}, site2({1, 0}, {-1, 0}));
  EXPECT_EQ(g[0], 2.0);
  EXPECT_EQ(g[1], 0.0);
  const Vec n = h_gradient(BoundarySpec::neumann([](const Vec&) { return 0.0; }), {5, 5}, site2({0, 0}, {1, 0}));
  EXPECT_EQ(n[0], 1.0);
  EXPECT_EQ(n[1], 0.0);
}

TEST(HGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const std::vector<BoundarySpec> specs{BoundarySpec::target_disk(1.3),
                                        BoundarySpec::neumann([](const Vec& x) { return x[0] * x[1]; })};
  for (const auto& spec : specs)
    for (int trial = 0; trial < 200; ++trial) {
      const double angle = d(rng);
      const BoundarySite site = site2({d(rng), d(rng)}, {std::cos(angle), std::sin(angle)});
      const Vec p{d(rng), d(rng)};
      const Vec g = h_gradient(spec, p, site);
      const double eps = 1e-6;
      for (int k = 0; k < 2; ++k) {
        Vec hi = p, lo = p;
        hi[k] += eps, lo[k] -= eps;
        EXPECT_NEAR(g[k], (h_value(spec, hi, site) - h_value(spec, lo, site)) / (2 * eps), 1e-7);
      }
    }
}

TEST(Obliqueness, SpecExamples) {
  // beta = (1, 0) from a Neumann condition along nu = (1, 0)
  const auto n = BoundarySpec::neumann([](const Vec&) { return 0.0; });
  EXPECT_EQ(obliqueness(n, {0, 0}, site2({0, 0}, {1, 0})), 1.0);
  // beta = (0, 1) from a Neumann condition along (0, 1), measured against nu = (1, 0)
  EXPECT_EQ(dot(h_gradient(n, {0, 0}, site2({0, 0}, {0, 1})), {1, 0}, 2), 0.0);
}

TEST(Obliqueness, RadialStateOnTheDisk) {
  // u = R |x|^2 / 2 has Du = R x; at (r, 0) with inward nu = (-1, 0): 2 (R r, 0) . nu = -2 R r
  const double big_r = 1.7, r = 0.9;
  const auto spec = BoundarySpec::target_disk(big_r);
  EXPECT_DOUBLE_EQ(obliqueness(spec, {big_r * r, 0.0}, site2({r, 0}, {-1, 0})), -2.0 * big_r * r);
}

TEST(BoundaryGradient, ThreePointFormulaInOneDimension) {
  const Grid g = line(11);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> d(-1, 1);
  State s = State::on(g);
  for (auto& v : s.u) v = d(rng);
  const auto& left = g.boundary_nodes()[0];
  const auto& right = g.boundary_nodes()[1];
  const double h = 0.1;
  EXPECT_NEAR(boundary_gradient(g, s.u, left)[0], (-3 * s.u[0] + 4 * s.u[1] - s.u[2]) / (2 * h), 1e-12);
  EXPECT_NEAR(boundary_gradient(g, s.u, right)[0], (3 * s.u[10] - 4 * s.u[9] + s.u[8]) / (2 * h), 1e-12);
}

TEST(BoundaryGradient, ExactOnQuadratics) {
  const auto q = [](const Vec& x) { return 0.8 * x[0] * x[0] + 0.3 * x[0] * x[1] - 0.6 * x[1] * x[1] - x[0] + 2 * x[1]; };
  const auto dq = [](const Vec& x) { return Vec{1.6 * x[0] + 0.3 * x[1] - 1.0, 0.3 * x[0] - 1.2 * x[1] + 2.0}; };
  for (const DomainSpec& spec : {DomainSpec{DomainKind::disk, {0.2, 0.1, 1.0}, {31, 31}},
                                 DomainSpec{DomainKind::disk, {0, 0, 1}, {61, 61}},
                                 DomainSpec{DomainKind::rectangle, {0, 1, -1, 2}, {7, 11}}}) {
    const Grid g = build_grid(spec);
    const State s = State::sample(g, q);
    for (const auto& bn : g.boundary_nodes()) {
      const BoundarySite site = site_of(g, bn);
      const Vec p = boundary_gradient(g, s.u, bn);
      const Vec want = dq(site.x);
      ASSERT_NEAR(p[0], want[0], 1e-10);
      ASSERT_NEAR(p[1], want[1], 1e-10);
    }
  }
}

TEST(Enforce, FluxExamples) {
  const Grid g = line(11);
  // constant neighbours: zero slope at the left end means the end value matches them
  State s = State::sample(g, [](const Vec&) { return 1.0; });
  s.u[0] = 7.0;
  EXPECT_NEAR(enforce(BoundarySpec::flux(0.0, 1.0), g, s).u[0], 1.0, 1e-12);
  // slope-one data ending at 0.95 next to the right end
  State r = State::sample(g, [](const Vec& x) { return x[0] + 0.05; });
  r.u[10] = -3.0;
  EXPECT_NEAR(r.u[9], 0.95, 1e-15);
  EXPECT_NEAR(enforce(BoundarySpec::flux(0.0, 1.0), g, r).u[10], 1.05, 1e-12);
}

TEST(Enforce, IdentityMapIsAFixedPointOnTheDisk) {
  const Grid g = unit_disk(41);
  const State s = State::sample(g, [](const Vec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); });
  const auto spec = BoundarySpec::target_disk(1.0);
  EXPECT_LE(max_abs(boundary_residuals(spec, g, s.u)), 1e-12);
  const State e = enforce(spec, g, s);
  double moved = 0.0;
  for (std::size_t k : g.active_nodes()) moved = std::max(moved, std::abs(e.u[k] - s.u[k]));
  EXPECT_LE(moved, 2.0 * g.spacing(0));
  EXPECT_LE(moved, 1e-12);
}

TEST(Enforce, ResidualToleranceAndIdempotence) {
  const Grid g = unit_disk(41);
  const auto spec = BoundarySpec::target_disk(1.0);
  const State s = State::sample(g, [](const Vec& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return 0.5 * r2 + 0.05 * (1 - r2) * std::cos(std::numbers::pi * x[0]) + 0.1 * x[1];
  });
  const State once = enforce(spec, g, s);
  EXPECT_LE(max_abs(boundary_residuals(spec, g, once.u)), 1e-10);
  const State twice = enforce(spec, g, once);
  for (std::size_t k : g.active_nodes()) ASSERT_LE(std::abs(twice.u[k] - once.u[k]), 1e-12);
  for (std::size_t k : g.interior_nodes()) ASSERT_EQ(once.u[k], s.u[k]);
}

TEST(Enforce, NeumannOnRectangleIncludingCorners) {
  const Grid g = build_grid({DomainKind::rectangle, {0, 1, 0, 1}, {9, 9}});
  const auto spec = BoundarySpec::neumann([](const Vec& x) { return 0.2 * x[0]; });
  const State s = State::sample(g, [](const Vec& x) { return std::sin(x[0] + 2 * x[1]); });
  const State e = enforce(spec, g, s);
  EXPECT_LE(max_abs(boundary_residuals(spec, g, e.u)), 1e-10);
}

TEST(Enforce, DegenerateGradientThrows) {
  const Grid g = unit_disk(21);
  const State flat = State::sample(g, [](const Vec&) { return 0.0; });
  try {
    (void)enforce(BoundarySpec::target_disk(1.0), g, flat);
    FAIL() << "expected DegeneracyError";
  } catch (const DegeneracyError& e) {
    EXPECT_LE(e.obliqueness(), 1e-8);
    EXPECT_NE(g.boundary_slot(e.node()), Grid::npos);
  }
}

TEST(Enforce, RejectsNonFiniteInput) {
  const Grid g = line(11);
  State s = State::sample(g, [](const Vec&) { return 0.0; });
  s.u[4] = std::nan("");
  EXPECT_THROW(enforce(BoundarySpec::flux(0, 0), g, s), UsageError);
}

TEST(Enforce, NewtonSlopeIsBoundedAwayFromZero) {
  // dh/du_b = grad_p h . g where g is the stencil sensitivity; on the disk |g| ~ 1/h
  const Grid g = unit_disk(41);
  const auto spec = BoundarySpec::target_disk(1.0);
  const State s = State::sample(g, [](const Vec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); });
  for (const auto& bn : g.boundary_nodes()) {
    const Vec sens = detail::boundary_gradient_impl(g, bn, [&](std::size_t k) { return k == bn.node ? 1.0 : 0.0; });
    const BoundarySite site = site_of(g, bn);
    const double slope = dot(h_gradient(spec, boundary_gradient(g, s.u, bn), site), sens, 2);
    EXPECT_GT(std::abs(slope), 1.0 / g.spacing(0));
  }
}

TEST(LinearizedObliqueVector, AveragesTheGradient) {
  const auto spec = BoundarySpec::target_disk(1.0);
  const BoundarySite site = site2({1, 0}, {-1, 0});
  const Vec beta = linearized_oblique_vector(spec, {1.0, 0.2}, {0.6, -0.2}, site);
  // grad_p h = 2p is linear, so the average is 2 * midpoint
  EXPECT_NEAR(beta[0], 1.6, 1e-15);
  EXPECT_NEAR(beta[1], 0.0, 1e-15);
}
