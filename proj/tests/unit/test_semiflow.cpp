#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpdde/semiflow.hpp"

using namespace lpdde;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }
const QuadratureConfig q;

HistoryElement randomHistory(std::mt19937_64& rng, double R = 1.0, int dim = 1) {
  return HistoryElement(randomPiecewisePolynomial(-R, 0, dim, 4, 3, 0.8, rng));
}

}  // namespace

TEST(Semiflow, Validation) {
  EXPECT_THROW(Semiflow({1, 2, 1}, makeCubic(1), 1.5), ParameterError);
  EXPECT_THROW(Semiflow({1, 2, 1}, makeCubic(2), 1.0), DimensionError);
  const Semiflow sf({1, 2, 1}, makeCubic(1), 1.0);
  EXPECT_THROW(sf.evolve(-0.1, HistoryElement::zero(1, 1), q), DomainError);
  EXPECT_TRUE(std::isinf(sf.escapeTime(HistoryElement::zero(1, 1))));
}

TEST(Evolve, Examples) {
  const Semiflow sf({1, 2, 1}, makeScalarLinear(1, 1), 1.0);
  const auto phi = HistoryElement::constant(1, v1(1));
  const HistoryElement at1 = sf.evolve(1.0, phi, q);
  for (double th : {-1.0, -0.4, 0.0}) {
    EXPECT_NEAR(at1(th)(0), 2.0 + th, 1e-14);
  }
  EXPECT_EQ(identityDefect(sf, phi, q), 0.0);

  const Semiflow frozen({1, 2, 1}, makeZero(1), 0.5);
  std::mt19937_64 rng(1);
  const HistoryElement any = randomHistory(rng);
  // For t >= R the segment is the constant endpoint value.
  const HistoryElement late = frozen.evolve(1.5, any, q);
  EXPECT_EQ(late(-0.7)(0), any.valueAtZero()(0));
  EXPECT_EQ(late(0.0)(0), any.valueAtZero()(0));
}

TEST(Semigroup, DefectIsRoundoff) {
  std::mt19937_64 rng(2);
  for (const Nonlinearity& nl : {makeCubic(1), makeSaturating(1), makeMackeyGlass(2.0, 1)}) {
    const Semiflow sf({1, 2, 1}, nl, 0.5);
    const HistoryElement phi = randomHistory(rng);
    EXPECT_LE(identityDefect(sf, phi, q), 1e-12);
    for (double t : {0.0, 0.3, 0.5, 0.9}) {
      for (double s : {0.0, 0.25, 0.5, 1.1}) {
        EXPECT_LE(semigroupDefect(sf, t, s, phi, q), 1e-9) << nl.name << " " << t << " " << s;
      }
    }
  }
  const Semiflow sf({1, 2, 1}, makeCubic(1), 1.0);
  EXPECT_THROW(semigroupDefect(sf, -1.0, 0.0, HistoryElement::zero(1, 1), q), DomainError);
}

TEST(QuotientInvariance, PointEditsDoNotMatter) {
  std::mt19937_64 rng(3);
  const Semiflow sf({1, 1.5, 1}, makeCubic(1), 1.0);
  for (int i = 0; i < 5; ++i) {
    const HistoryElement phi = randomHistory(rng);
    const HistoryElement psi(phi.rep().withPointValue(-0.5, phi(-0.5).array() + 7.0));
    for (double t : {0.0, 0.5, 1.0, 1.7}) {
      EXPECT_LE(quotientInvariance(sf, t, phi, psi, q), 1e-12);
    }
    const HistoryElement moved(phi.rep().withEndpointValue(phi.valueAtZero().array() + 1.0));
    EXPECT_THROW(quotientInvariance(sf, 0.5, phi, moved, q), ContractError);
  }
}

TEST(QuotientDistance, MatchesSeminorm) {
  std::mt19937_64 rng(4);
  for (double p : {1.0, 2.0, 3.5}) {
    const HistoryConfig cfg{1.2, p, 2};
    const HistoryElement a = randomHistory(rng, 1.2, 2);
    const HistoryElement b = randomHistory(rng, 1.2, 2);
    const QuotientDistance d = quotientDistance(a, b, cfg, q);
    EXPECT_NEAR(d.pair, d.seminorm, 1e-10 * std::max(1.0, d.seminorm));
  }
}

TEST(ContinuityModulus, Examples) {
  const Semiflow frozen({1, 2, 1}, makeZero(1), 1.0);
  const auto cols = continuityModulus(frozen, {0.5}, HistoryElement::zero(1, 1),
                                      HistoryElement::constant(1, v1(1)), 6, q);
  ASSERT_EQ(cols.size(), 1u);
  for (std::size_t k = 0; k < cols[0].table.rows.size(); ++k) {
    const ScheduleRow& row = cols[0].table.rows[k];
    // Zero right-hand side: the flow is a translation, gaps equal input gaps.
    EXPECT_NEAR(row.output, row.input, 1e-14);
    EXPECT_NEAR(row.input, std::sqrt(2.0) * std::ldexp(1.0, -static_cast<int>(k)), 1e-14);
  }

  std::mt19937_64 rng(5);
  const Semiflow sf({1, 2, 1}, makeSaturating(1), 0.5);
  const HistoryElement phi = randomHistory(rng);
  const HistoryElement d0(randomPiecewiseConstant(-1, 0, 1, 8, rng));
  for (const ModulusColumn& c : continuityModulus(sf, {0.0, 0.4, 1.0, 2.0}, phi, d0, 14, q)) {
    EXPECT_TRUE(c.table.certifyOutputs().passed) << c.t;
    EXPECT_GE(c.table.worstBoundSlack(), -1e-8) << c.t;
  }
}

TEST(TimeTRemainder, QuadraticExample) {
  const Semiflow sf({1, 2, 1}, makeQuadratic(1, 0.5), 1.0);
  const RemainderTable t = timeTDerivativeRemainder(
      sf, 1.0, HistoryElement::zero(1, 1), HistoryElement::constant(1, v1(1)), 10, q);
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const double h = std::ldexp(1.0, -static_cast<int>(k));
    EXPECT_NEAR(t.rows[k].output, h * h / std::sqrt(3.0), 1e-13);
    EXPECT_LE(t.rows[k].output, t.rows[k].bound + 1e-12);
  }
  EXPECT_TRUE(t.certifyRatios().passed);
  EXPECT_THROW(timeTDerivativeRemainder(sf, 1.0, HistoryElement::zero(1, 1),
                                        HistoryElement::constant(1, v1(1)), 2, q),
               ParameterError);
}

TEST(TimeTRemainder, LinearIsExact) {
  Matrix a(2, 2);
  a << 0.2, -1.0, 0.5, 0.1;
  const Semiflow sf({1, 2, 2}, makeLinear(a), 0.7);
  std::mt19937_64 rng(6);
  const RemainderTable t = timeTDerivativeRemainder(sf, 0.6, randomHistory(rng, 1, 2),
                                                    randomHistory(rng, 1, 2), 6, q);
  for (const ScheduleRow& row : t.rows) {
    EXPECT_LE(row.output, 1e-10);
  }
  EXPECT_TRUE(t.certifyRatios().exact);
}

TEST(ABoundedness, SoundConstantHolds) {
  std::mt19937_64 rng(7);
  for (const Nonlinearity& nl : {makeCubic(1), makeQuadratic(1, 1.0), makeScalarLinear(1, 10)}) {
    const Semiflow sf({1, 3, 1}, nl, 1.0);
    const HistoryElement phi = randomHistory(rng);
    for (double t : {0.25, 1.0}) {
      const ABoundedness b = aBoundedness(sf, t, phi, q);
      EXPECT_GT(b.probedNorm, 0.0);
      EXPECT_LE(b.probedNorm, b.soundConstant + 1e-8) << nl.name;
    }
  }
}

TEST(ABoundedness, StatedConstantOmitsB) {
  // f(y) = 10 y: the probe exceeds (1+t)^{1/p} + (R+1)^{1/p}.
  const Semiflow sf({1, 2, 1}, makeScalarLinear(1, 10), 1.0);
  const ABoundedness b = aBoundedness(sf, 1.0, HistoryElement::zero(1, 1), q);
  EXPECT_GT(b.probedNorm, b.statedConstant);
  EXPECT_LE(b.probedNorm, b.soundConstant + 1e-8);
}

TEST(TimeTDerivativeContinuity, Examples) {
  const Semiflow lin({1, 2, 1}, makeScalarLinear(1, 3), 1.0);
  std::mt19937_64 rng(8);
  const DerivativeContinuity l =
      timeTDerivativeContinuity(lin, 0.5, randomHistory(rng), randomHistory(rng), q);
  EXPECT_EQ(l.bound, 0.0);
  EXPECT_LE(l.probedGap, 1e-12);

  const Semiflow sf({1, 3, 1}, makeCubic(1), 1.0);
  const HistoryElement phi = randomHistory(rng);
  double previous = INFINITY;
  for (int k = 0; k < 8; ++k) {
    const HistoryElement phi0 =
        phi + std::ldexp(1.0, -k) * HistoryElement::constant(1, v1(1));
    const DerivativeContinuity d = timeTDerivativeContinuity(sf, 1.0, phi, phi0, q);
    EXPECT_LE(d.probedGap, d.bound + 1e-8);
    EXPECT_LE(d.bound, previous);
    previous = d.bound;
  }
}

TEST(EscapeTime, SolvesFarPastTheDelay) {
  std::mt19937_64 rng(9);
  const Semiflow sf({1, 2, 1}, makeSaturating(1), 0.5);
  const HistoryElement phi = randomHistory(rng);
  const HistoryElement far = sf.evolve(5.0, phi, q);
  EXPECT_TRUE(std::isfinite(seminorm(far, sf.config(), q)));
}
