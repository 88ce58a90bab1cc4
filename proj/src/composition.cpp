#include "lpdde/composition.hpp"

#include <algorithm>
#include <string>

namespace lpdde {

void MeasureDomain::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw ParameterError("MeasureDomain: need finite a < b");
  }
}

CompositionContext::CompositionContext(Nonlinearity nl, MeasureDomain X,
                                       CompositionMode mode, double alpha,
                                       double q)
    : nl_(std::move(nl)), X_(X), mode_(mode), alpha_(alpha), q_(q) {
  X_.validate();
  if (!(q_ >= 1.0) || !std::isfinite(q_)) {
    throw ContractError("CompositionContext: q must be a finite number >= 1");
  }
  if (!(alpha_ > 0.0)) {
    throw ContractError("CompositionContext: growth exponent must be positive");
  }
  p_ = mode_ == CompositionMode::Continuity ? alpha_ * q_ : (alpha_ + 1.0) * q_;
  if (!(p_ >= 1.0)) {
    throw ContractError("CompositionContext: p = " + std::to_string(p_) +
                        " must be >= 1");
  }
}

CompositionContext CompositionContext::continuity(Nonlinearity nl,
                                                  MeasureDomain X, double q) {
  const double alpha = nl.fGrowth.alpha;
  return CompositionContext(std::move(nl), X, CompositionMode::Continuity, alpha,
                            q);
}

CompositionContext CompositionContext::smoothness(Nonlinearity nl,
                                                  MeasureDomain X, double q) {
  if (!nl.jacobian || !nl.dfGrowth) {
    throw ContractError("CompositionContext: '" + nl.name +
                        "' has no Jacobian growth certificate");
  }
  const double alpha = nl.dfGrowth->alpha;
  return CompositionContext(std::move(nl), X, CompositionMode::Smoothness, alpha,
                            q);
}

namespace {

void requireOnDomain(const CompositionContext& ctx, const PiecewiseFunction& g,
                     const char* what) {
  const MeasureDomain& X = ctx.domain();
  const double tol = kBreakpointTolerance * std::max({1.0, std::abs(X.a), std::abs(X.b)});
  if (std::abs(g.lower() - X.a) > tol || std::abs(g.upper() - X.b) > tol) {
    throw DomainError(std::string(what) + " does not live on the measure domain");
  }
  if (g.dim() != ctx.nl().dimIn) {
    throw DimensionError(std::string(what) + " has the wrong number of components");
  }
}

void requireSmoothness(const CompositionContext& ctx, const char* op) {
  if (ctx.mode() != CompositionMode::Smoothness) {
    throw ContractError(std::string(op) + " needs smoothness-mode exponents");
  }
}

LazyComposition difference(const Nonlinearity& nl, const PiecewiseFunction& u,
                           const PiecewiseFunction& v) {
  const int m = nl.dimIn;
  return LazyComposition(
      stack(u, v),
      [nl, m](const Vector& z) -> Vector {
        return nl(z.head(m)) - nl(z.tail(m));
      },
      nl.dimOut);
}

}  // namespace

CompositionResult applyComposition(const CompositionContext& ctx,
                                   const PiecewiseFunction& g,
                                   const QuadratureConfig& cfg) {
  requireOnDomain(ctx, g, "applyComposition: g");
  const Nonlinearity& nl = ctx.nl();
  const double q = ctx.q();
  CompositionResult out{LazyComposition(g, nl.eval, nl.dimOut), 0.0, 0.0};
  out.norm = lpNorm(out.value, q, cfg);
  const GrowthBound& gb = nl.fGrowth;
  const double aq = gb.alpha * q;
  const double gPower = std::pow(lpNorm(g, aq, cfg), aq);
  out.powerBound = std::pow(2.0, q - 1.0) *
                   (std::pow(gb.c1, q) * gPower +
                    std::pow(gb.c2, q) * ctx.domain().mass());
  return out;
}

ScheduleTable continuityProbe(const CompositionContext& ctx,
                              const PiecewiseFunction& g,
                              const PiecewiseFunction& d0, int K,
                              const QuadratureConfig& cfg) {
  if (K < 0) {
    throw ParameterError("continuityProbe: K must be >= 0");
  }
  requireOnDomain(ctx, g, "continuityProbe: g");
  requireOnDomain(ctx, d0, "continuityProbe: direction");
  ScheduleTable table;
  for (int k = 0; k <= K; ++k) {
    const PiecewiseFunction d = scale(d0, std::ldexp(1.0, -k));
    const PiecewiseFunction gk = add(g, d);
    ScheduleRow row;
    row.input = lpNorm(d, ctx.p(), cfg);
    row.output = lpNorm(difference(ctx.nl(), gk, g), ctx.q(), cfg);
    row.ratio = row.input > 0.0 ? row.output / row.input : 0.0;
    if (ctx.nl().lipschitz) {
      row.bound = *ctx.nl().lipschitz * lpNorm(d, ctx.q(), cfg);
    }
    table.rows.push_back(row);
  }
  return table;
}

DerivativeResult applyDerivative(const CompositionContext& ctx,
                                 const PiecewiseFunction& g,
                                 const PiecewiseFunction& h,
                                 const QuadratureConfig& cfg) {
  requireSmoothness(ctx, "applyDerivative");
  requireOnDomain(ctx, g, "applyDerivative: g");
  requireOnDomain(ctx, h, "applyDerivative: h");
  const Nonlinearity& nl = ctx.nl();
  const int m = nl.dimIn;
  const JacobianMap jac = nl.jacobian;
  DerivativeResult out{
      LazyComposition(
          stack(g, h),
          [jac, m](const Vector& z) -> Vector {
            return jac(z.head(m)) * z.tail(m);
          },
          nl.dimOut),
      0.0, 0.0};
  out.norm = lpNorm(out.value, ctx.q(), cfg);
  const LazyComposition dfNorm(
      g,
      [nl](const Vector& y) -> Vector {
        return Vector::Constant(1, nl.jacobianNorm(y));
      },
      1);
  out.operatorBound = lpNorm(dfNorm, ctx.p() / ctx.alpha(), cfg);
  return out;
}

LinearOperatorProbe derivativeNormProbe(const CompositionContext& ctx,
                                        const PiecewiseFunction& g,
                                        const QuadratureConfig& cfg, int probes,
                                        std::uint64_t seed) {
  requireSmoothness(ctx, "derivativeNormProbe");
  requireOnDomain(ctx, g, "derivativeNormProbe: g");
  const MeasureDomain& X = ctx.domain();
  const ProbeSpec spec{X.a, X.b, ctx.nl().dimIn, probes, 8, seed};
  return estimateOperatorNorm(
      [&](const PiecewiseFunction& h) {
        return applyDerivative(ctx, g, snapDomain(h, X.a, X.b), cfg).norm;
      },
      [&](const PiecewiseFunction& h) { return lpNorm(h, ctx.p(), cfg); },
      spec);
}

RemainderTable smoothnessProbe(const CompositionContext& ctx,
                               const PiecewiseFunction& g,
                               const PiecewiseFunction& h0, int K,
                               const QuadratureConfig& cfg) {
  requireSmoothness(ctx, "smoothnessProbe");
  if (K < 3) {
    throw ParameterError("smoothnessProbe: K must be >= 3");
  }
  requireOnDomain(ctx, g, "smoothnessProbe: g");
  requireOnDomain(ctx, h0, "smoothnessProbe: h0");
  const Nonlinearity& nl = ctx.nl();
  const int m = nl.dimIn;
  const JacobianMap jac = nl.jacobian;
  RemainderTable table;
  for (int k = 0; k <= K; ++k) {
    const PiecewiseFunction h = scale(h0, std::ldexp(1.0, -k));
    const LazyComposition rem(
        stack(g, h),
        [nl, jac, m](const Vector& z) -> Vector {
          const Vector y = z.head(m);
          const Vector d = z.tail(m);
          return nl(y + d) - nl(y) - jac(y) * d;
        },
        nl.dimOut);
    ScheduleRow row;
    row.input = lpNorm(h, ctx.p(), cfg);
    row.output = lpNorm(rem, ctx.q(), cfg);
    row.ratio = row.input > 0.0 ? row.output / row.input : 0.0;
    if (nl.jacobianLipschitz) {
      const double h2q = lpNorm(h, 2.0 * ctx.q(), cfg);
      row.bound = 0.5 * *nl.jacobianLipschitz * h2q * h2q;
    }
    table.rows.push_back(row);
  }
  return table;
}

DerivativeGap derivativeContinuityProbe(const CompositionContext& ctx,
                                        const PiecewiseFunction& g,
                                        const PiecewiseFunction& g0,
                                        const QuadratureConfig& cfg, int probes,
                                        std::uint64_t seed) {
  requireSmoothness(ctx, "derivativeContinuityProbe");
  requireOnDomain(ctx, g, "derivativeContinuityProbe: g");
  requireOnDomain(ctx, g0, "derivativeContinuityProbe: g0");
  const Nonlinearity& nl = ctx.nl();
  const int m = nl.dimIn;
  const PiecewiseFunction pair = stack(g, g0);
  DerivativeGap out;
  const LazyComposition jacGap(
      pair,
      [nl, m](const Vector& z) -> Vector {
        return Vector::Constant(
            1, matrixNorm(nl.jacobian(z.head(m)) - nl.jacobian(z.tail(m)), nl.norm));
      },
      1);
  out.bound = lpNorm(jacGap, ctx.p() / ctx.alpha(), cfg);

  const MeasureDomain& X = ctx.domain();
  const ProbeSpec spec{X.a, X.b, m, probes, 8, seed};
  out.probedGap =
      estimateOperatorNorm(
          [&](const PiecewiseFunction& hRaw) {
            const PiecewiseFunction h = snapDomain(hRaw, X.a, X.b);
            const LazyComposition applied(
                stack(pair, h),
                [nl, m](const Vector& z) -> Vector {
                  const Vector d = z.tail(m);
                  return (nl.jacobian(z.head(m)) - nl.jacobian(z.segment(m, m))) * d;
                },
                nl.dimOut);
            return lpNorm(applied, ctx.q(), cfg);
          },
          [&](const PiecewiseFunction& h) { return lpNorm(h, ctx.p(), cfg); },
          spec)
          .lowerBound;
  return out;
}

}  // namespace lpdde
