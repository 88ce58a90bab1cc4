#include "lpdde/derivops.hpp"

#include <string>

namespace lpdde {

DerivativeContext::DerivativeContext(Problem pb, double T)
    : pb_(std::move(pb)), T_(T) {
  pb_.validate();
  if (!pb_.nl.jacobian || !pb_.nl.dfGrowth) {
    throw ContractError("DerivativeContext: '" + pb_.nl.name +
                        "' lacks a Jacobian growth certificate");
  }
  if (!(T_ > 0.0) || T_ > pb_.r * (1.0 + kBreakpointTolerance)) {
    throw ParameterError("DerivativeContext: horizon T must lie in (0, r]");
  }
  alpha_ = pb_.nl.dfGrowth->alpha;
  if (!(alpha_ >= 1.0)) {
    throw ContractError("DerivativeContext: Jacobian growth exponent must be >= 1");
  }
  if (pb_.cfg.p < alpha_ + 1.0 - 1e-12) {
    throw ContractError("DerivativeContext: p = " + std::to_string(pb_.cfg.p) +
                        " must be >= alpha + 1 = " + std::to_string(alpha_ + 1.0));
  }
  q_ = holderConjugate(alpha_ + 1.0);
}

DerivativeContext DerivativeContext::at(const HistoryElement& phi) const {
  return DerivativeContext(pb_.withHistory(phi), T_);
}

namespace {

void requireDirection(const DerivativeContext& ctx, const HistoryElement& chi) {
  if (chi.dim() != ctx.problem().cfg.N) {
    throw DimensionError("derivative operator: direction has wrong dimension");
  }
  if (std::abs(chi.R() - ctx.problem().cfg.R) >
      kBreakpointTolerance * std::max(1.0, ctx.problem().cfg.R)) {
    throw DimensionError("derivative operator: direction not on [-R, 0]");
  }
}

PiecewiseFunction solutionPart(const Problem& pb, double T,
                               const QuadratureConfig& cfg) {
  return decompose(solve(pb, T, cfg));
}

double remainderFromBase(const DerivativeContext& ctx,
                         const PiecewiseFunction& yBase,
                         const HistoryElement& chi,
                         const QuadratureConfig& cfg) {
  const Problem& pb = ctx.problem();
  const PiecewiseFunction yPert =
      solutionPart(pb.withHistory(pb.phi + chi), ctx.T(), cfg);
  const PiecewiseFunction rem =
      subtract(subtract(yPert, yBase), applyB(ctx, chi, cfg));
  return supNorm(rem, cfg);
}

}  // namespace

PiecewiseFunction applyB(const DerivativeContext& ctx, const HistoryElement& chi,
                         const QuadratureConfig& cfg) {
  requireDirection(ctx, chi);
  const Problem& pb = ctx.problem();
  const int n = pb.cfg.N;
  const double r = pb.r;
  const double R = pb.cfg.R;
  const JacobianMap jac = pb.nl.jacobian;
  const PiecewiseFunction pair =
      restrict(stack(pb.phi.rep(), chi.rep()), -r, ctx.T() - r);
  const LazyComposition integrand(
      pair,
      [jac, n](const Vector& z) -> Vector {
        return jac(z.head(n)) * z.tail(n);
      },
      n);
  const CumulativeIntegral integral =
      cumulativeIntegral(integrand.shifted(r), Vector::Zero(n), cfg);
  return join(PiecewiseFunction::zero(-R, 0.0, n),
              snapDomain(integral.function, 0.0, ctx.T()));
}

PiecewiseFunction applyA(const DerivativeContext& ctx, const HistoryElement& chi,
                         const QuadratureConfig& cfg) {
  return add(staticProlongation(chi, ctx.T()), applyB(ctx, chi, cfg));
}

double bNormUpperBound(const DerivativeContext& ctx, const QuadratureConfig& cfg) {
  const Nonlinearity nl = ctx.problem().nl;
  const LazyComposition norms(
      ctx.problem().phi.rep(),
      [nl](const Vector& y) -> Vector {
        return Vector::Constant(1, nl.jacobianNorm(y));
      },
      1);
  return lpNorm(norms, ctx.q(), cfg);
}

LinearOperatorProbe estimateOperatorNorm(
    const std::function<double(const PiecewiseFunction&)>& applyAndMeasure,
    const std::function<double(const PiecewiseFunction&)>& normIn,
    const ProbeSpec& spec) {
  if (spec.probes < 1) {
    throw ParameterError("estimateOperatorNorm: probes must be >= 1");
  }
  std::mt19937_64 rng(spec.seed);
  LinearOperatorProbe out;
  for (int k = 0; k < spec.probes; ++k) {
    PiecewiseFunction chi =
        randomPiecewiseConstant(spec.a, spec.b, spec.dim, spec.pieces, rng);
    const double n = normIn(chi);
    if (!(n > 0.0)) {
      continue;
    }
    chi = scale(chi, 1.0 / n);
    const double ratio = applyAndMeasure(chi);
    out.ratios.push_back(ratio);
    out.lowerBound = std::max(out.lowerBound, ratio);
  }
  return out;
}

double frechetRemainder(const DerivativeContext& ctx, const HistoryElement& chi,
                        const QuadratureConfig& cfg) {
  const PiecewiseFunction yBase = solutionPart(ctx.problem(), ctx.T(), cfg);
  return remainderFromBase(ctx, yBase, chi, cfg);
}

PiecewiseFunction quotientRemainder(const DerivativeContext& ctx,
                                    const HistoryElement& chi,
                                    const QuadratureConfig& cfg) {
  const Problem& pb = ctx.problem();
  const Trajectory base = solve(pb, ctx.T(), cfg);
  const Trajectory pert = solve(pb.withHistory(pb.phi + chi), ctx.T(), cfg);
  return subtract(subtract(pert.x, base.x), applyA(ctx, chi, cfg));
}

RemainderTable remainderSchedule(const DerivativeContext& ctx,
                                 const HistoryElement& chi0, int K,
                                 const QuadratureConfig& cfg) {
  if (K < 3) {
    throw ParameterError("remainderSchedule: K must be >= 3");
  }
  requireDirection(ctx, chi0);
  const PiecewiseFunction yBase = solutionPart(ctx.problem(), ctx.T(), cfg);
  const auto& lipDf = ctx.problem().nl.jacobianLipschitz;
  RemainderTable table;
  for (int k = 0; k <= K; ++k) {
    const HistoryElement chi = std::ldexp(1.0, -k) * chi0;
    ScheduleRow row;
    row.input = lpNorm(chi.rep(), ctx.inputExponent(), cfg);
    row.output = remainderFromBase(ctx, yBase, chi, cfg);
    row.ratio = row.input > 0.0 ? row.output / row.input : 0.0;
    if (lipDf) {
      const double l2 = lpNorm(chi.rep(), 2.0, cfg);
      row.bound = 0.5 * *lipDf * l2 * l2;
    }
    table.rows.push_back(row);
  }
  return table;
}

double gateauxDefect(const DerivativeContext& ctx, const HistoryElement& chi,
                     double h, const QuadratureConfig& cfg) {
  if (h == 0.0) {
    throw ParameterError("gateauxDefect: step must be nonzero");
  }
  const Problem& pb = ctx.problem();
  const PiecewiseFunction yBase = solutionPart(pb, ctx.T(), cfg);
  const PiecewiseFunction yPert =
      solutionPart(pb.withHistory(pb.phi + h * chi), ctx.T(), cfg);
  const PiecewiseFunction quotient =
      scale(subtract(yPert, yBase), 1.0 / h);
  return supNorm(subtract(quotient, applyB(ctx, chi, cfg)), cfg);
}

BContinuity bContinuity(const DerivativeContext& ctx, const HistoryElement& phi,
                        const HistoryElement& phi0, const QuadratureConfig& cfg,
                        int probes, std::uint64_t seed) {
  const Nonlinearity nl = ctx.problem().nl;
  const int n = ctx.problem().cfg.N;
  const LazyComposition gap(
      stack(phi.rep(), phi0.rep()),
      [nl, n](const Vector& z) -> Vector {
        return Vector::Constant(
            1, matrixNorm(nl.jacobian(z.head(n)) - nl.jacobian(z.tail(n)), nl.norm));
      },
      1);
  BContinuity out;
  out.holderBound = lpNorm(gap, ctx.q(), cfg);

  const DerivativeContext first = ctx.at(phi);
  const DerivativeContext second = ctx.at(phi0);
  const double R = ctx.problem().cfg.R;
  const ProbeSpec spec{-R, 0.0, n, probes, 8, seed};
  out.operatorGapLowerBound =
      estimateOperatorNorm(
          [&](const PiecewiseFunction& chi) {
            const HistoryElement h(chi);
            return supNorm(subtract(applyB(first, h, cfg), applyB(second, h, cfg)),
                           cfg);
          },
          [&](const PiecewiseFunction& chi) {
            return lpNorm(chi, ctx.inputExponent(), cfg);
          },
          spec)
          .lowerBound;
  return out;
}

}  // namespace lpdde
