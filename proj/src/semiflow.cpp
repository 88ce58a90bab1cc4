#include "lpdde/semiflow.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace lpdde {

Semiflow::Semiflow(HistoryConfig cfg, Nonlinearity nl, double r)
    : cfg_(cfg), nl_(std::move(nl)), r_(r) {
  cfg_.validate();
  if (!(r_ > 0.0) || r_ > cfg_.R * (1.0 + kBreakpointTolerance)) {
    throw ParameterError("Semiflow: delay r must lie in (0, R]");
  }
  if (nl_.dimIn != cfg_.N || nl_.dimOut != cfg_.N) {
    throw DimensionError("Semiflow: nonlinearity does not map R^N to R^N");
  }
}

double Semiflow::escapeTime(const HistoryElement&) const {
  return std::numeric_limits<double>::infinity();
}

Problem Semiflow::problem(const HistoryElement& phi) const {
  Problem pb{cfg_, nl_, r_, phi};
  pb.validate();
  return pb;
}

HistoryElement Semiflow::evolve(double t, const HistoryElement& phi,
                                const QuadratureConfig& q) const {
  if (!(t >= 0.0)) {
    throw DomainError("Semiflow::evolve: t must be nonnegative");
  }
  const Problem pb = problem(phi);
  if (t == 0.0) {
    return phi;
  }
  return historySegment(solve(pb, t, q).x, t);
}

double identityDefect(const Semiflow& sf, const HistoryElement& phi,
                      const QuadratureConfig& q) {
  return seminorm(sf.evolve(0.0, phi, q) - phi, sf.config(), q);
}

double semigroupDefect(const Semiflow& sf, double t, double s,
                       const HistoryElement& phi, const QuadratureConfig& q) {
  if (!(t >= 0.0) || !(s >= 0.0)) {
    throw DomainError("semigroupDefect: t and s must be nonnegative");
  }
  const HistoryElement direct = sf.evolve(t + s, phi, q);
  const HistoryElement composed = sf.evolve(s, sf.evolve(t, phi, q), q);
  return seminorm(direct - composed, sf.config(), q);
}

double quotientInvariance(const Semiflow& sf, double t, const HistoryElement& phi,
                          const HistoryElement& psi, const QuadratureConfig& q) {
  if (!sameClass(phi, psi, sf.config(), q)) {
    throw ContractError("quotientInvariance: inputs are not in the same class");
  }
  return seminorm(sf.evolve(t, phi, q) - sf.evolve(t, psi, q), sf.config(), q);
}

QuotientDistance quotientDistance(const HistoryElement& phi,
                                  const HistoryElement& psi,
                                  const HistoryConfig& cfg,
                                  const QuadratureConfig& q) {
  const QuotientPair a = isoFromQuotient(phi);
  const QuotientPair b = isoFromQuotient(psi);
  QuotientDistance out;
  out.pair = pairNorm(QuotientPair{subtract(a.aeClass, b.aeClass), a.eta - b.eta},
                      cfg.p, q);
  out.seminorm = seminorm(phi - psi, cfg, q);
  return out;
}

std::vector<ModulusColumn> continuityModulus(const Semiflow& sf,
                                             const std::vector<double>& tGrid,
                                             const HistoryElement& phi,
                                             const HistoryElement& d0, int K,
                                             const QuadratureConfig& q) {
  if (K < 0) {
    throw ParameterError("continuityModulus: K must be >= 0");
  }
  const HistoryConfig& cfg = sf.config();
  const double p = cfg.p;
  std::vector<ModulusColumn> columns;
  for (double t : tGrid) {
    if (!(t >= 0.0)) {
      throw DomainError("continuityModulus: t must be nonnegative");
    }
    ModulusColumn column;
    column.t = t;
    std::optional<Trajectory> base;
    if (t > 0.0) {
      base = solve(sf.problem(phi), t, q);
    }
    for (int k = 0; k <= K; ++k) {
      const HistoryElement d = std::ldexp(1.0, -k) * d0;
      const HistoryElement phiK = phi + d;
      ScheduleRow row;
      row.input = seminorm(d, cfg, q);
      double yGap = 0.0;
      if (t > 0.0) {
        const Trajectory pert = solve(sf.problem(phiK), t, q);
        row.output = seminorm(
            historySegment(pert.x, t) - historySegment(base->x, t), cfg, q);
        yGap = supNorm(subtract(decompose(pert), decompose(*base)), q);
      } else {
        row.output = row.input;
      }
      row.ratio = row.input > 0.0 ? row.output / row.input : 0.0;
      row.bound = std::pow(cfg.R + 1.0, 1.0 / p) * yGap +
                  std::pow(1.0 + t, 1.0 / p) * row.input;
      column.table.rows.push_back(row);
    }
    columns.push_back(std::move(column));
  }
  return columns;
}

RemainderTable timeTDerivativeRemainder(const Semiflow& sf, double t,
                                        const HistoryElement& phi,
                                        const HistoryElement& chi0, int K,
                                        const QuadratureConfig& q) {
  if (K < 3) {
    throw ParameterError("timeTDerivativeRemainder: K must be >= 3");
  }
  const DerivativeContext ctx(sf.problem(phi), t);
  const HistoryConfig& cfg = sf.config();
  const HistoryElement base = sf.evolve(t, phi, q);
  const auto& lipDf = sf.nonlinearity().jacobianLipschitz;
  const double segmentFactor =
      std::pow(std::min(t, cfg.R) + 1.0, 1.0 / cfg.p);
  RemainderTable table;
  for (int k = 0; k <= K; ++k) {
    const HistoryElement chi = std::ldexp(1.0, -k) * chi0;
    const HistoryElement linear = historySegment(applyA(ctx, chi, q), t);
    ScheduleRow row;
    row.input = seminorm(chi, cfg, q);
    row.output =
        seminorm(sf.evolve(t, phi + chi, q) - base - linear, cfg, q);
    row.ratio = row.input > 0.0 ? row.output / row.input : 0.0;
    if (lipDf) {
      const double l2 = lpNorm(chi.rep(), 2.0, q);
      row.bound = segmentFactor * 0.5 * *lipDf * l2 * l2;
    }
    table.rows.push_back(row);
  }
  return table;
}

namespace {

/// (R+1)^{1/p} R^{1/(alpha+1) - 1/p}: turns an L^{alpha+1} -> C bound into a
/// history-space bound.
double embeddingFactor(const DerivativeContext& ctx) {
  const double R = ctx.problem().cfg.R;
  const double p = ctx.p();
  return std::pow(R + 1.0, 1.0 / p) *
         std::pow(R, 1.0 / ctx.inputExponent() - 1.0 / p);
}

ProbeSpec historyProbes(const HistoryConfig& cfg, int probes, std::uint64_t seed) {
  return ProbeSpec{-cfg.R, 0.0, cfg.N, probes, 8, seed};
}

}  // namespace

ABoundedness aBoundedness(const Semiflow& sf, double t, const HistoryElement& phi,
                          const QuadratureConfig& q, int probes,
                          std::uint64_t seed) {
  const DerivativeContext ctx(sf.problem(phi), t);
  const HistoryConfig& cfg = sf.config();
  const double p = cfg.p;
  ABoundedness out;
  out.statedConstant =
      std::pow(1.0 + t, 1.0 / p) + std::pow(cfg.R + 1.0, 1.0 / p);
  out.soundConstant = std::pow(1.0 + t, 1.0 / p) +
                      embeddingFactor(ctx) * bNormUpperBound(ctx, q);
  out.probedNorm =
      estimateOperatorNorm(
          [&](const PiecewiseFunction& chi) {
            return seminorm(historySegment(applyA(ctx, HistoryElement(chi), q), t),
                            cfg, q);
          },
          [&](const PiecewiseFunction& chi) {
            return seminorm(HistoryElement(chi), cfg, q);
          },
          historyProbes(cfg, probes, seed))
          .lowerBound;
  return out;
}

DerivativeContinuity timeTDerivativeContinuity(const Semiflow& sf, double t,
                                               const HistoryElement& phi,
                                               const HistoryElement& phi0,
                                               const QuadratureConfig& q,
                                               int probes, std::uint64_t seed) {
  const DerivativeContext first(sf.problem(phi), t);
  const DerivativeContext second(sf.problem(phi0), t);
  const HistoryConfig& cfg = sf.config();
  const Nonlinearity& nl = sf.nonlinearity();
  const int n = cfg.N;
  const LazyComposition gap(
      stack(phi.rep(), phi0.rep()),
      [nl, n](const Vector& z) -> Vector {
        return Vector::Constant(
            1, matrixNorm(nl.jacobian(z.head(n)) - nl.jacobian(z.tail(n)), nl.norm));
      },
      1);
  DerivativeContinuity out;
  out.bound = embeddingFactor(first) * lpNorm(gap, first.q(), q);
  out.probedGap =
      estimateOperatorNorm(
          [&](const PiecewiseFunction& chiRep) {
            const HistoryElement chi(chiRep);
            return seminorm(historySegment(applyA(first, chi, q), t) -
                                historySegment(applyA(second, chi, q), t),
                            cfg, q);
          },
          [&](const PiecewiseFunction& chi) {
            return seminorm(HistoryElement(chi), cfg, q);
          },
          historyProbes(cfg, probes, seed))
          .lowerBound;
  return out;
}

}  // namespace lpdde
