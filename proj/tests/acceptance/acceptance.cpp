// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "lpdde/composition.hpp"
#include "lpdde/derivops.hpp"
#include "lpdde/harness.hpp"
#include "lpdde/semiflow.hpp"
#include "oracles.hpp"

using namespace lpdde;

namespace {

// Tolerances.
constexpr double kSolverTol = 1e-7;
constexpr double kSolverSeconds = 10.0;
constexpr double kSeminormTol = 1e-10;
constexpr double kIsometryTol = 1e-10;
constexpr double kBoundSlack = -1e-8;
constexpr double kBoundSeconds = 120.0;
constexpr int kCorpus = 20;
constexpr double kDecayFactor = 1e-3;
constexpr double kSecondOrderTol = 1e-8;
constexpr double kLinearRemainderTol = 1e-10;
constexpr double kAxiomTol = 1e-9;
constexpr double kQuotientTol = 1e-10;
constexpr double kDemoTol = 1e-12;
constexpr double kDirectBoundTol = 1e-8;

const QuadratureConfig q;
const double inf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Vector v1(double x) { return Vector::Constant(1, x); }

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back((ok ? "ok   " : "BAD  ") + std::move(note));
  }
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v) {
  std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str());
  for (const std::string& n : v.notes) {
    std::printf("    %s\n", n.c_str());
  }
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

HistoryElement randomHistory(std::mt19937_64& rng, double R, int dim, double scale) {
  return HistoryElement(randomPiecewisePolynomial(-R, 0, dim, 4, 3, scale, rng));
}

HistoryElement randomStep(std::mt19937_64& rng, double R, int dim) {
  return HistoryElement(randomPiecewiseConstant(-R, 0, dim, 8, rng));
}

Problem problemOf(const Nonlinearity& nl, const HistoryElement& phi, double r, double R,
                  double p) {
  return Problem{HistoryConfig{R, p, phi.dim()}, nl, r, phi};
}

std::vector<Nonlinearity> smoothPool() {
  return {makeCubic(1), makeQuadratic(1, 0.5), makeSaturating(1), makeMackeyGlass(2.0, 1),
          makeQuadratic(2, 1.0), makeSaturating(2)};
}

std::vector<Nonlinearity> lipschitzPool() {
  Matrix a(2, 2);
  a << 0.5, -1.0, 0.25, 0.75;
  return {makeSaturating(1), makeMackeyGlass(2.0, 1), makeScalarLinear(1, -2.0), makeLinear(a),
          makeSaturating(2)};
}

// 1. Solver against the closed form and the Riemann oracle.
void solverOracle() {
  Verdict v;
  const auto start = Clock::now();
  const Problem pb = problemOf(makeScalarLinear(1, 1), HistoryElement::constant(1, v1(1)),
                               1.0, 1.0, 2.0);
  const Trajectory x = solve(pb, 2.0, q);
  const double at2 = x.x.evaluate(2.0)(0);
  v.check(std::abs(at2 - 3.5) <= kSolverTol, fmt::format("x(2) = {:.17g}", at2));
  const auto ref = oracle::riemannSolve([](double y) { return y; }, [](double) { return 1.0; },
                                        1.0, 2, 1'000'000);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    worst = std::max(worst, std::abs(x.x.evaluate(i * ref.h)(0) - ref.x[i]));
  }
  v.check(worst <= kSolverTol, fmt::format("sup gap to Riemann oracle {:.3e}", worst));
  const double elapsed = seconds(start);
  v.check(elapsed <= kSolverSeconds, fmt::format("runtime {:.2f} s", elapsed));
  report(1, "solver oracle", v);
}

// 2. Seminorm against exact integrals, quotient-pair isometry.
void seminormCorpus() {
  Verdict v;
  std::mt19937_64 rng(2002);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.25, 3.0);
  double worst = 0.0;
  double worstIso = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double R = u(rng);
    const int dim = 1 + i % 3;
    const int degree = i % 5;
    std::vector<oracle::Poly> polys(dim);
    std::vector<std::vector<double>> coeffs(dim);
    Vector eta(dim);
    for (int c = 0; c < dim; ++c) {
      for (int k = 0; k <= degree; ++k) {
        coeffs[c].push_back(n(rng));
        polys[c].push_back(coeffs[c].back());
      }
      eta(c) = n(rng);
    }
    const HistoryElement phi(PiecewiseFunction::fromMonomials({-R, 0}, {coeffs}, eta));
    for (int p : {2, 4}) {
      const long double exact = std::pow(
          oracle::evenPowerIntegral(polys, p, -R, 0) +
              std::pow(static_cast<long double>(eta.squaredNorm()), p / 2.0L),
          1.0L / p);
      const double got = seminorm(phi, {R, static_cast<double>(p), dim}, q);
      worst = std::max(worst, std::abs(got - static_cast<double>(exact)) /
                                  std::max(1.0, static_cast<double>(exact)));
      const QuotientPair pair = isoFromQuotient(phi);
      worstIso = std::max(worstIso,
                          std::abs(pairNorm(pair, p, q) - got) +
                              seminorm(isoToQuotient(pair) - phi, {R, static_cast<double>(p), dim},
                                       q));
    }
  }
  v.check(worst <= kSeminormTol, fmt::format("worst seminorm error {:.3e} over 50 x 2", worst));
  v.check(worstIso <= kIsometryTol, fmt::format("worst isometry defect {:.3e}", worstIso));
  report(2, "seminorm and isometry", v);
}

// 3. Stated constants over seeded corpora.
void boundSuite() {
  Verdict v;
  const auto start = Clock::now();
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto slackLine = [&](const std::string& name, double slack, int count) {
    v.check(slack >= kBoundSlack,
            fmt::format("{}: worst slack {:.6g} over {} instances", name, slack, count));
  };

  {
    double slack = inf;
    for (int i = 0; i < kCorpus; ++i) {
      const double R = 0.5 + 2 * u(rng);
      const double p = 1.0 + 3 * u(rng);
      const double T = 0.1 + 4 * u(rng);
      const HistoryElement phi = randomHistory(rng, R, 1 + i % 2, 1.0);
      const double lhs = barNorm(staticProlongation(phi, T), p, q);
      slack = std::min(slack, std::pow(1 + T, 1 / p) * seminorm(phi, {R, p, phi.dim()}, q) - lhs);
    }
    slackLine("prolongation (1+T)^{1/p}", slack, kCorpus);
  }
  {
    double slack = inf;
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < kCorpus; ++i) {
      const double a = -2 * u(rng);
      const double b = a + 0.1 + 3 * u(rng);
      const double p = 1.0 + 4 * u(rng);
      const auto x0 = PiecewiseFunction::fromMonomials({a, b}, {{{n(rng), n(rng), n(rng)}}}, v1(0));
      const auto x = x0.withEndpointValue(x0.piece(0)(b));
      slack = std::min(slack, std::pow(b - a + 1, 1 / p) * supNorm(x, q) - barNorm(x, p, q));
    }
    slackLine("regulation (b-a+1)^{1/p}", slack, kCorpus);
  }
  {
    double slack = inf;
    const auto pool = smoothPool();
    for (int i = 0; i < kCorpus; ++i) {
      const Nonlinearity& nl = pool[i % pool.size()];
      const double p = std::max(nl.dfGrowth->alpha + 1.0, 2.0) + u(rng);
      const HistoryElement phi = randomHistory(rng, 1.0, nl.dimIn, 1.0);
      const DerivativeContext ctx(problemOf(nl, phi, 0.5 + 0.5 * u(rng), 1.0, p), 0.5);
      const double bound = bNormUpperBound(ctx, q);
      const LinearOperatorProbe probe = estimateOperatorNorm(
          [&](const PiecewiseFunction& chi) {
            return supNorm(applyB(ctx, HistoryElement(chi), q), q);
          },
          [&](const PiecewiseFunction& chi) { return lpNorm(chi, ctx.inputExponent(), q); },
          ProbeSpec{-1.0, 0.0, nl.dimIn, 16, 8, rng()});
      slack = std::min(slack, bound - probe.lowerBound);
    }
    slackLine("Hoelder bound ||B|| <= ||Df o phi||_q", slack, kCorpus);
  }
  {
    double slack = inf;
    double soundSlack = inf;
    auto pool = smoothPool();
    pool.push_back(makeScalarLinear(1, 10.0));
    int count = 0;
    const auto one = [&](const Nonlinearity& nl, const HistoryElement& phi, double t, double p) {
      const Semiflow sf({1.0, p, nl.dimIn}, nl, 1.0);
      const ABoundedness b = aBoundedness(sf, t, phi, q, 16, rng());
      slack = std::min(slack, b.statedConstant - b.probedNorm);
      soundSlack = std::min(soundSlack, b.soundConstant - b.probedNorm);
      ++count;
    };
    for (int i = 0; i < kCorpus; ++i) {
      const Nonlinearity& nl = pool[i % (pool.size() - 1)];
      one(nl, randomHistory(rng, 1.0, nl.dimIn, 1.0), 0.1 + 0.9 * u(rng),
          nl.dfGrowth->alpha + 1.0 + u(rng));
    }
    const double seeded = slack;
    // f(y) = 10 y at phi = 0, t = r = R = 1.
    one(pool.back(), HistoryElement::zero(1, 1), 1.0, 2.0);
    slackLine("A-boundedness (1+t)^{1/p} + (R+1)^{1/p}", slack, count);
    v.notes.push_back(fmt::format("info A-boundedness seeded instances only: worst slack {:.6g}",
                                  seeded));
    v.notes.push_back(fmt::format(
        "info A-boundedness with the ||Df o phi||_q factor: worst slack {:.6g}", soundSlack));
  }
  {
    double slack = inf;
    double soundSlack = inf;
    const auto pool = lipschitzPool();
    int count = 0;
    const auto one = [&](const Problem& pb, const HistoryElement& other, double T) {
      const LipschitzSample s = lipschitzSample(pb, other, T, q);
      slack = std::min(slack, s.statedConstant - s.ratio);
      soundSlack = std::min(soundSlack, s.soundConstant - s.ratio);
      ++count;
    };
    for (int i = 0; i < kCorpus; ++i) {
      const Nonlinearity& nl = pool[i % pool.size()];
      const double R = 1.0 + u(rng);
      const double r = 0.25 + 0.75 * u(rng);
      const HistoryElement phi = randomHistory(rng, R, nl.dimIn, 1.0);
      const HistoryElement other = phi + randomStep(rng, R, nl.dimIn);
      one(problemOf(nl, phi, r, R, 1.0), other, r * (0.2 + 0.8 * u(rng)));
    }
    const double seeded = slack;
    // f(y) = y, perturbation concentrated next to theta = -r.
    const double eps = 1e-3;
    const HistoryElement bump(
        PiecewiseFunction::piecewiseConstant({-1, -1 + eps, 0}, {v1(1 / eps), v1(0)}, v1(0)));
    one(problemOf(makeScalarLinear(1, 1), HistoryElement::zero(1, 1), 1.0, 1.0, 1.0), bump, 0.9);
    slackLine("Lipschitz lip(f) T/(T+R+1) + (1+T)", slack, count);
    v.notes.push_back(
        fmt::format("info Lipschitz seeded instances only: worst slack {:.6g}", seeded));
    v.notes.push_back(fmt::format(
        "info Lipschitz with (1+lip(f))(1+T): worst slack {:.6g}", soundSlack));
  }
  {
    double slack = inf;
    const std::vector<Nonlinearity> pool{makeCubic(1), makeQuadratic(2, 0.5), makeSaturating(2),
                                         makeMackeyGlass(2.0, 1), makeConstant(v1(-2)),
                                         makeScalarLinear(1, 3.0)};
    for (int i = 0; i < kCorpus; ++i) {
      const Nonlinearity& nl = pool[i % pool.size()];
      const double a = -u(rng);
      const MeasureDomain X{a, a + 0.2 + 2 * u(rng)};
      const double qe = 1.0 + 2 * u(rng);
      const auto ctx = CompositionContext::continuity(nl, X, qe);
      const auto g = randomPiecewisePolynomial(X.a, X.b, nl.dimIn, 4, 3, 2.0, rng);
      const CompositionResult r = applyComposition(ctx, g, q);
      slack = std::min(slack, r.powerBound - std::pow(r.norm, qe));
    }
    slackLine("composition step-one power bound", slack, kCorpus);
  }
  const double elapsed = seconds(start);
  v.check(elapsed <= kBoundSeconds, fmt::format("runtime {:.2f} s", elapsed));
  report(3, "bound suite with the stated constants", v);
}

// 4. Remainder ratio tables tend to zero.
void remainderCertificates() {
  Verdict v;
  std::mt19937_64 rng(4004);
  const auto pool = smoothPool();
  const int K = 14;
  int decayed = 0, total = 0;
  double secondOrder = inf;
  double linearWorst = 0.0;
  const auto tally = [&](const ScheduleTable& t, const Nonlinearity& nl) {
    ++total;
    if (t.certifyRatios(1e-10, kDecayFactor).passed) ++decayed;
    if (nl.jacobianLipschitz) secondOrder = std::min(secondOrder, t.worstBoundSlack());
  };

  for (std::size_t i = 0; i < pool.size(); ++i) {
    const Nonlinearity& nl = pool[i];
    const double p = nl.dfGrowth->alpha + 1.0 + 0.5;
    const HistoryElement phi = randomHistory(rng, 1.0, nl.dimIn, 0.5);
    const HistoryElement chi0 = randomStep(rng, 1.0, nl.dimIn);
    const Problem pb = problemOf(nl, phi, 1.0, 1.0, p);
    const DerivativeContext ctx(pb, 1.0);

    // Remainder of the B form.
    tally(remainderSchedule(ctx, chi0, K, q), nl);

    // Remainder of the A form on the prolonged solution.
    ScheduleTable a;
    const Trajectory base = solve(pb, 1.0, q);
    for (int k = 0; k <= K; ++k) {
      const HistoryElement chi = std::ldexp(1.0, -k) * chi0;
      const Trajectory pert = solve(pb.withHistory(pb.phi + chi), 1.0, q);
      ScheduleRow row;
      row.input = seminorm(chi, pb.cfg, q);
      row.output = barNorm(subtract(subtract(pert.x, base.x), applyA(ctx, chi, q)), p, q);
      row.ratio = row.output / row.input;
      a.rows.push_back(row);
    }
    ++total;
    if (a.certifyRatios(1e-10, kDecayFactor).passed) ++decayed;

    // Time-t map.
    const Semiflow sf(pb.cfg, nl, 1.0);
    tally(timeTDerivativeRemainder(sf, 0.75, phi, chi0, K, q), nl);

    // Composition operator.
    const auto cc = CompositionContext::smoothness(nl, MeasureDomain{0.0, 1.0}, 1.0 + 0.5 * (i % 2));
    tally(smoothnessProbe(cc, randomPiecewisePolynomial(0, 1, nl.dimIn, 3, 2, 0.5, rng),
                          randomPiecewiseConstant(0, 1, nl.dimIn, 8, rng), K, q),
          nl);
  }
  v.check(decayed == total, fmt::format("{} of {} ratio tables certified", decayed, total));
  v.check(secondOrder >= -kSecondOrderTol,
          fmt::format("half lip(Df) |chi|^2 bound: worst slack {:.3e}", secondOrder));

  Matrix m(2, 2);
  m << 0.3, -0.7, 1.1, 0.2;
  for (const Nonlinearity& nl : {makeScalarLinear(1, -1.5), makeLinear(m)}) {
    const HistoryElement phi = randomHistory(rng, 1.0, nl.dimIn, 1.0);
    const HistoryElement chi0 = randomStep(rng, 1.0, nl.dimIn);
    const Problem pb = problemOf(nl, phi, 1.0, 1.0, 2.0);
    const Semiflow sf(pb.cfg, nl, 1.0);
    const auto cc = CompositionContext::smoothness(nl, MeasureDomain{0.0, 1.0}, 1.0);
    for (const ScheduleTable& t :
         {remainderSchedule(DerivativeContext(pb, 1.0), chi0, 8, q),
          timeTDerivativeRemainder(sf, 1.0, phi, chi0, 8, q),
          smoothnessProbe(cc, randomPiecewisePolynomial(0, 1, nl.dimIn, 3, 2, 1.0, rng),
                          randomPiecewiseConstant(0, 1, nl.dimIn, 8, rng), 8, q)}) {
      for (const double o : t.outputs()) linearWorst = std::max(linearWorst, o);
    }
  }
  v.check(linearWorst <= kLinearRemainderTol,
          fmt::format("linear controls: largest remainder {:.3e}", linearWorst));
  report(4, "remainder certificates", v);
}

// 5. Semiflow axioms on 20 problems.
void semiflowAxioms() {
  Verdict v;
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto pool = smoothPool();
  double identity = 0.0, semigroup = 0.0, quotient = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Nonlinearity& nl = pool[i % pool.size()];
    const double R = 0.5 + u(rng);
    const double r = R * (0.3 + 0.7 * u(rng));
    const double p = 1.0 + 2 * u(rng);
    const Semiflow sf({R, p, nl.dimIn}, nl, r);
    const HistoryElement phi = randomHistory(rng, R, nl.dimIn, 0.5);
    identity = std::max(identity, identityDefect(sf, phi, q));
    // Pairs that land on, straddle and cross step boundaries.
    for (const auto& [t, s] : std::vector<std::pair<double, double>>{
             {0.0, 0.3 * r}, {0.5 * r, 0.5 * r}, {0.4 * r, 0.9 * r}, {r, r}, {0.7 * r, 1.6 * r}}) {
      semigroup = std::max(semigroup, semigroupDefect(sf, t, s, phi, q));
    }
    const Vector shifted = phi(-R / 2).array() + 7.0;
    const HistoryElement psi(phi.rep().withPointValue(-R / 2, shifted).withPointValue(-r, shifted));
    for (double t : {0.0, 0.5 * r, r, 1.5 * r}) {
      quotient = std::max(quotient, quotientInvariance(sf, t, phi, psi, q));
    }
  }
  v.check(identity <= kAxiomTol, fmt::format("identity defect {:.3e}", identity));
  v.check(semigroup <= kAxiomTol, fmt::format("semigroup defect {:.3e}", semigroup));
  v.check(quotient <= kQuotientTol, fmt::format("null-set edit defect {:.3e}", quotient));
  report(5, "semiflow axioms", v);
}

// 6. The history functional is discontinuous in the seminorm.
void discontinuity() {
  Verdict v;
  // n >= 2 keeps [-r - 1/n, -r + 1/n] inside [-R, 0] for r = R/2.
  const std::vector<int> ns{2, 10, 100, 1000, 10000};
  const auto demo = [&](const Nonlinearity& nl, double p) {
    const CsvTable t = runDiscontinuityDemo(nl, 1.0, 0.5, p, ns, q);
    const double jump = (nl(Vector::Ones(nl.dimIn)) - nl(Vector::Zero(nl.dimIn))).norm();
    double inputErr = 0.0, outputErr = 0.0, previous = inf;
    bool decreasing = true;
    for (const auto& row : t.rows) {
      const double analytic =
          std::sqrt(static_cast<double>(nl.dimIn)) * std::pow(2.0 / row[0], 1.0 / p);
      inputErr = std::max(inputErr, std::abs(row[1] - analytic));
      outputErr = std::max(outputErr, std::abs(row[3] - jump));
      decreasing = decreasing && row[1] < previous;
      previous = row[1];
    }
    v.check(inputErr <= kDemoTol && outputErr <= kDemoTol && jump > 0.0 && decreasing,
            fmt::format("{} p={}: input error {:.3e}, output stays {:.6g}, last input {:.3e}",
                        nl.name, p, inputErr, jump, previous));
  };
  demo(makeCubic(1), 1.0);
  demo(makeCubic(1), 2.0);
  demo(makeScalarLinear(1, 1.0), 1.5);
  demo(makeSaturating(2), 2.0);
  report(6, "discontinuity of the history functional", v);
}

// 7. Continuity along geometric schedules.
void continuityProbes() {
  Verdict v;
  std::mt19937_64 rng(7007);
  const int K = 16;
  int decayed = 0, total = 0;
  double direct = inf;
  const auto pool = smoothPool();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const Nonlinearity& nl = pool[i];
    const double p = 1.0 + static_cast<double>(i % 3);
    const HistoryElement phi = randomHistory(rng, 1.0, nl.dimIn, 0.5);
    const HistoryElement phi0 = phi + randomStep(rng, 1.0, nl.dimIn);

    const ScheduleTable dep = dependenceSchedule(problemOf(nl, phi, 1.0, 1.0, p), phi0, 1.0, K, q);
    ++total;
    if (dep.certifyOutputs(1e-10, kDecayFactor).passed) ++decayed;
    direct = std::min(direct, dep.worstBoundSlack());

    const Semiflow sf({1.0, p, nl.dimIn}, nl, 0.5);
    for (const ModulusColumn& c :
         continuityModulus(sf, {0.25, 0.5, 1.2}, phi, randomStep(rng, 1.0, nl.dimIn), K, q)) {
      ++total;
      if (c.table.certifyOutputs(1e-10, kDecayFactor).passed) ++decayed;
    }

    const auto cc = CompositionContext::continuity(nl, MeasureDomain{-1.0, 1.0}, 1.0 + 0.5 * (i % 3));
    const ScheduleTable comp =
        continuityProbe(cc, randomPiecewisePolynomial(-1, 1, nl.dimIn, 4, 3, 1.0, rng),
                        randomPiecewiseConstant(-1, 1, nl.dimIn, 8, rng), K, q);
    ++total;
    if (comp.certifyOutputs(1e-10, kDecayFactor).passed) ++decayed;
  }
  v.check(decayed == total, fmt::format("{} of {} gap tables certified", decayed, total));
  v.check(direct >= -kDirectBoundTol,
          fmt::format("y gap <= L1 composition gap: worst slack {:.3e}", direct));
  report(7, "continuity probes", v);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{
      solverOracle,          seminormCorpus, boundSuite,      remainderCertificates,
      semiflowAxioms,        discontinuity,  continuityProbes};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: exception: %s\n",
                  static_cast<int>(&c - criteria.data()) + 1, e.what());
      ++failures;
    }
  }
  std::printf("%s %d of %zu criteria\n", failures ? "FAIL" : "PASS",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
