#pragma once

#include <cstdint>

#include "lpdde/derivops.hpp"
#include "lpdde/nonlinear.hpp"
#include "lpdde/schedule.hpp"

namespace lpdde {

/// [a, b] with Lebesgue measure.
struct MeasureDomain {
  double a = 0.0;
  double b = 1.0;

  double mass() const { return b - a; }
  void validate() const;
};

enum class CompositionMode { Continuity, Smoothness };

/// Exponents for g -> f o g from L^p(X) to L^q(X).
///   continuity: alpha from the growth of |f|, p = alpha q
///   smoothness: alpha from the growth of ||Df||, p = (alpha + 1) q
class CompositionContext {
 public:
  static CompositionContext continuity(Nonlinearity nl, MeasureDomain X, double q);
  static CompositionContext smoothness(Nonlinearity nl, MeasureDomain X, double q);

  const Nonlinearity& nl() const { return nl_; }
  const MeasureDomain& domain() const { return X_; }
  CompositionMode mode() const { return mode_; }
  double alpha() const { return alpha_; }
  double p() const { return p_; }
  double q() const { return q_; }

 private:
  CompositionContext(Nonlinearity nl, MeasureDomain X, CompositionMode mode,
                     double alpha, double q);

  Nonlinearity nl_;
  MeasureDomain X_;
  CompositionMode mode_;
  double alpha_;
  double p_;
  double q_;
};

struct CompositionResult {
  LazyComposition value;
  /// ||f o g||_{L^q}.
  double norm = 0.0;
  /// 2^{q-1} (C1^q ||g||_{alpha q}^{alpha q} + C2^q mu(X)), a bound on norm^q.
  double powerBound = 0.0;
};

CompositionResult applyComposition(const CompositionContext& ctx,
                                   const PiecewiseFunction& g,
                                   const QuadratureConfig& cfg);

/// Rows k = 0..K for g_k = g + 2^{-k} d0: input ||g_k - g||_{L^p}, output
/// ||f o g_k - f o g||_{L^q}. When f is globally Lipschitz the row bound is
/// lip(f) ||g_k - g||_{L^q}.
ScheduleTable continuityProbe(const CompositionContext& ctx,
                              const PiecewiseFunction& g,
                              const PiecewiseFunction& d0, int K,
                              const QuadratureConfig& cfg);

struct DerivativeResult {
  LazyComposition value;
  /// ||Df(g) h||_{L^q}.
  double norm = 0.0;
  /// ||Df o g||_{L^{p/alpha}}, a bound on the norm of h -> Df(g) h.
  double operatorBound = 0.0;
};

/// x -> Df(g(x)) h(x). Smoothness mode only.
DerivativeResult applyDerivative(const CompositionContext& ctx,
                                 const PiecewiseFunction& g,
                                 const PiecewiseFunction& h,
                                 const QuadratureConfig& cfg);

/// Seeded lower bound on the L^p -> L^q norm of h -> Df(g) h.
LinearOperatorProbe derivativeNormProbe(const CompositionContext& ctx,
                                        const PiecewiseFunction& g,
                                        const QuadratureConfig& cfg,
                                        int probes = 16, std::uint64_t seed = 11);

/// Rows k = 0..K for h_k = 2^{-k} h0: input ||h_k||_{L^p}, output
/// ||T(g + h_k) - T(g) - DT(g) h_k||_{L^q}. When Df is globally Lipschitz the
/// row bound is (1/2) lip(Df) ||h_k||_{L^{2q}}^2.
RemainderTable smoothnessProbe(const CompositionContext& ctx,
                               const PiecewiseFunction& g,
                               const PiecewiseFunction& h0, int K,
                               const QuadratureConfig& cfg);

struct DerivativeGap {
  /// Probed lower bound on ||DT(g) - DT(g0)||.
  double probedGap = 0.0;
  /// ||Df o g - Df o g0||_{L^{p/alpha}}.
  double bound = 0.0;
};

DerivativeGap derivativeContinuityProbe(const CompositionContext& ctx,
                                        const PiecewiseFunction& g,
                                        const PiecewiseFunction& g0,
                                        const QuadratureConfig& cfg,
                                        int probes = 16, std::uint64_t seed = 13);

}  // namespace lpdde
