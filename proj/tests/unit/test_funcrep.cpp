#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpdde/funcrep.hpp"

using namespace lpdde;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

PiecewiseFunction identityOn(double a, double b, double endpoint) {
  return PiecewiseFunction::fromMonomials({a, b}, {{{0.0, 1.0}}}, v1(endpoint));
}

const QuadratureConfig cfg;

}  // namespace

TEST(Evaluate, ConstantEverywhere) {
  const auto f = PiecewiseFunction::constant(-2.0, 3.0, Vector::Constant(2, 4.5));
  for (double t : {-2.0, -1.0, 0.0, 2.9, 3.0}) {
    EXPECT_DOUBLE_EQ(f.evaluate(t)(0), 4.5);
    EXPECT_DOUBLE_EQ(f.evaluate(t)(1), 4.5);
  }
}

TEST(Evaluate, IdentityPiece) {
  EXPECT_NEAR(identityOn(-1, 0, 0).evaluate(-0.5)(0), -0.5, 1e-15);
}

TEST(Evaluate, DistinguishedEndpoint) {
  const auto f = PiecewiseFunction::zero(-1, 0, 1).withEndpointValue(v1(1.0));
  EXPECT_EQ(f.evaluate(0.0)(0), 1.0);
  EXPECT_EQ(f.evaluate(-0.3)(0), 0.0);
}

TEST(Evaluate, HalfOpenPieces) {
  const auto f = PiecewiseFunction::piecewiseConstant({0, 1, 2}, {v1(1), v1(2)}, v1(3));
  EXPECT_EQ(f.evaluate(0.999)(0), 1.0);
  EXPECT_EQ(f.evaluate(1.0)(0), 2.0);
  EXPECT_EQ(f.evaluate(2.0)(0), 3.0);
}

TEST(Evaluate, OutsideDomainThrows) {
  const auto f = PiecewiseFunction::zero(0, 1, 1);
  EXPECT_THROW(f.evaluate(1.5), DomainError);
  EXPECT_THROW(f.evaluate(-0.1), DomainError);
}

TEST(Evaluate, LazyCompositionUsesEndpoint) {
  const auto base = PiecewiseFunction::zero(-1, 0, 1).withEndpointValue(v1(2.0));
  const LazyComposition g(base, [](const Vector& y) -> Vector { return y * 3.0; }, 1);
  EXPECT_EQ(g.evaluate(0.0)(0), 6.0);
  EXPECT_EQ(g.evaluate(-0.5)(0), 0.0);
}

TEST(Construction, RejectsBadBreakpoints) {
  EXPECT_THROW(PiecewiseFunction::piecewiseConstant({0, 0}, {v1(1)}, v1(1)), Error);
  EXPECT_THROW(PiecewiseFunction::piecewiseConstant({1, 0}, {v1(1)}, v1(1)), Error);
}

TEST(LpNorm, Examples) {
  EXPECT_NEAR(lpNorm(PiecewiseFunction::constant(-1, 0, v1(1)), 1.0, cfg), 1.0, 1e-15);
  EXPECT_NEAR(lpNorm(identityOn(-1, 0, 0), 2.0, cfg), std::sqrt(1.0 / 3.0), 1e-14);
  const auto ae0 = PiecewiseFunction::zero(-1, 0, 1).withEndpointValue(v1(7));
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    EXPECT_EQ(lpNorm(ae0, p, cfg), 0.0);
  }
}

TEST(LpNorm, RejectsSmallExponent) {
  EXPECT_THROW(lpNorm(PiecewiseFunction::zero(0, 1, 1), 0.5, cfg), ParameterError);
}

TEST(LpNorm, PiecewiseConstantIsExact) {
  const auto f = PiecewiseFunction::piecewiseConstant({0, 0.25, 1}, {v1(2), v1(-1)}, v1(0));
  // 0.25 * 8 + 0.75 * 1
  EXPECT_NEAR(lpNorm(f, 3.0, cfg), std::cbrt(2.75), 1e-15);
}

TEST(SupNorm, Examples) {
  EXPECT_EQ(supNorm(PiecewiseFunction::constant(0, 1, v1(-3)), cfg), 3.0);
  EXPECT_NEAR(supNorm(identityOn(0, 1, 1), cfg), 1.0, 1e-15);
  const auto parabola =
      PiecewiseFunction::fromMonomials({0, 1}, {{{0.0, 1.0, -1.0}}}, v1(0));
  EXPECT_NEAR(supNorm(parabola, cfg), 0.25, 1e-12);
}

TEST(Shift, Examples) {
  const auto phi = identityOn(-1, 0, 0);
  const auto s = shift(phi, 1.0);
  EXPECT_DOUBLE_EQ(s.lower(), 0.0);
  EXPECT_DOUBLE_EQ(s.upper(), 1.0);
  EXPECT_NEAR(s.evaluate(0.25)(0), phi.evaluate(-0.75)(0), 1e-15);
  EXPECT_NEAR(shift(phi, 0.5).evaluate(0.0)(0), -0.5, 1e-15);
  const auto same = shift(phi, 0.0);
  EXPECT_EQ(same.breakpoints(), phi.breakpoints());
  EXPECT_NEAR(same.evaluate(-0.3)(0), -0.3, 1e-15);
}

TEST(Algebra, Examples) {
  std::mt19937_64 rng(3);
  const auto phi = randomPiecewisePolynomial(-1, 0, 2, 4, 3, 1.0, rng);
  EXPECT_NEAR(supNorm(add(phi, scale(phi, -1.0)), cfg), 0.0, 1e-15);
  const auto three = scale(PiecewiseFunction::constant(-1, 0, v1(1)), 3.0);
  EXPECT_EQ(three.evaluate(-0.5)(0), 3.0);
  EXPECT_EQ(three.evaluate(0.0)(0), 3.0);
  const auto r = restrict(identityOn(-1, 1, 1), -1.0, 0.0);
  EXPECT_NEAR(r.evaluate(0.0)(0), 0.0, 1e-15);
}

TEST(Algebra, DimensionMismatchThrows) {
  EXPECT_THROW(add(PiecewiseFunction::zero(0, 1, 1), PiecewiseFunction::zero(0, 1, 2)),
               DimensionError);
  EXPECT_THROW(add(PiecewiseFunction::zero(0, 1, 1), PiecewiseFunction::zero(0, 2, 1)),
               Error);
  EXPECT_THROW(restrict(PiecewiseFunction::zero(0, 1, 1), 0.5, 2.0), Error);
}

TEST(Algebra, RestrictKeepsDistinguishedEndpoint) {
  const auto f = PiecewiseFunction::zero(-1, 0, 1).withEndpointValue(v1(5));
  EXPECT_EQ(restrict(f, -0.5, 0.0).evaluate(0.0)(0), 5.0);
  EXPECT_EQ(restrict(f, -1.0, -0.5).evaluate(-0.5)(0), 0.0);
}

TEST(Materialize, Examples) {
  const auto base = identityOn(0, 1, 1);
  const auto id = materialize(
      LazyComposition(base, [](const Vector& y) { return y; }, 1), 1, cfg);
  EXPECT_LE(id.defect, 1e-15);
  EXPECT_NEAR(id.function.evaluate(0.3)(0), 0.3, 1e-15);

  const auto c = materialize(
      LazyComposition(PiecewiseFunction::constant(0, 1, v1(2)),
                      [](const Vector& y) -> Vector { return y.array().square(); }, 1),
      0, cfg);
  EXPECT_NEAR(c.function.evaluate(0.7)(0), 4.0, 1e-15);

  const auto sq = materialize(
      LazyComposition(base, [](const Vector& y) -> Vector { return y.array().square(); }, 1),
      2, cfg);
  EXPECT_LE(sq.defect, cfg.tolerance);
  EXPECT_NEAR(sq.function.evaluate(0.3)(0), 0.09, 1e-14);
}

TEST(Properties, TriangleAndHomogeneity) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const auto f = randomPiecewisePolynomial(-1, 0.5, 2, 5, 4, 1.0, rng);
    const auto g = randomPiecewisePolynomial(-1, 0.5, 2, 5, 4, 1.0, rng);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      EXPECT_LE(lpNorm(add(f, g), p, cfg), lpNorm(f, p, cfg) + lpNorm(g, p, cfg) + 1e-8);
      EXPECT_NEAR(lpNorm(scale(f, -2.5), p, cfg), 2.5 * lpNorm(f, p, cfg), 1e-8);
    }
  }
}

TEST(Properties, NullSetEditsDoNotChangeNorm) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto f = randomPiecewisePolynomial(-1, 0, 1, 4, 3, 1.0, rng);
    const double t = f.breakpoints()[f.pieceCount() / 2];
    const auto g = f.withPointValue(t, v1(100.0)).withEndpointValue(v1(-9.0));
    for (double p : {1.0, 2.0, 3.5}) {
      EXPECT_EQ(lpNorm(f, p, cfg), lpNorm(g, p, cfg));
    }
  }
}

TEST(Properties, ShiftPreservesNorm) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const auto f = randomPiecewisePolynomial(-1, 0, 2, 4, 3, 1.0, rng);
    for (double p : {1.0, 2.0, 3.0}) {
      EXPECT_NEAR(lpNorm(shift(f, 0.37), p, cfg), lpNorm(f, p, cfg), 1e-10);
    }
  }
}

TEST(Properties, MaterializePolynomialMap) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const auto base = randomPiecewisePolynomial(0, 1, 1, 3, 3, 1.0, rng);
    const LazyComposition cube(
        base, [](const Vector& y) -> Vector { return y.array().cube(); }, 1);
    const auto m = materialize(cube, 9, cfg);
    for (int k = 0; k < 100; ++k) {
      const double t = u(rng);
      EXPECT_NEAR(m.function.evaluate(t)(0), cube.evaluate(t)(0), 1e-9);
    }
  }
}

TEST(CumulativeIntegral, PolynomialAntiderivative) {
  const auto base = identityOn(0, 2, 2);
  const LazyComposition g(base, [](const Vector& y) { return y; }, 1);
  const auto r = cumulativeIntegral(g, v1(1.0), cfg);
  EXPECT_NEAR(r.function.evaluate(2.0)(0), 3.0, 1e-14);
  EXPECT_NEAR(r.function.evaluate(1.0)(0), 1.5, 1e-14);
}

TEST(CumulativeIntegral, BisectsNonsmoothIntegrand) {
  const auto base = identityOn(-1, 1, 1);
  const LazyComposition g(
      base, [](const Vector& y) -> Vector { return y.array().abs().sqrt(); }, 1);
  const auto r = cumulativeIntegral(g, v1(0.0), cfg);
  // int_{-1}^{1} sqrt|t| dt = 4/3
  EXPECT_NEAR(r.function.evaluate(1.0)(0), 4.0 / 3.0, 1e-6);
}
