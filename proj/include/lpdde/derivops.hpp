#pragma once

#include <cstdint>
#include <functional>

#include "lpdde/schedule.hpp"
#include "lpdde/solver.hpp"

namespace lpdde {

/// Base point (phi, r), horizon T <= r and the exponents of the smooth
/// dependence result: inputs are measured in L^{alpha+1}, the Hoelder
/// conjugate q = (alpha+1)/alpha governs ||Df o phi||, and the history
/// exponent p = problem().cfg.p must be >= alpha + 1.
class DerivativeContext {
 public:
  DerivativeContext(Problem pb, double T);

  const Problem& problem() const { return pb_; }
  double T() const { return T_; }
  double p() const { return pb_.cfg.p; }
  double alpha() const { return alpha_; }
  double q() const { return q_; }
  /// alpha + 1.
  double inputExponent() const { return alpha_ + 1.0; }

  /// Same exponents and horizon at another base point.
  DerivativeContext at(const HistoryElement& phi) const;

 private:
  Problem pb_;
  double T_;
  double alpha_;
  double q_;
};

/// B chi: 0 on [-R, 0], t -> int_0^t Df(phi(s - r)) chi(s - r) ds on [0, T].
PiecewiseFunction applyB(const DerivativeContext& ctx, const HistoryElement& chi,
                         const QuadratureConfig& cfg);

/// A chi = staticProlongation(chi, T) + B chi.
PiecewiseFunction applyA(const DerivativeContext& ctx, const HistoryElement& chi,
                         const QuadratureConfig& cfg);

/// ||Df o phi||_{L^q[-R, 0]}, the Hoelder bound on ||B||.
double bNormUpperBound(const DerivativeContext& ctx, const QuadratureConfig& cfg);

/// Empirical lower bound on an operator norm from random probes.
struct LinearOperatorProbe {
  double lowerBound = 0.0;
  std::vector<double> ratios;
};

struct ProbeSpec {
  double a = -1.0;
  double b = 0.0;
  int dim = 1;
  int probes = 16;
  /// Piecewise-constant pieces per probe.
  int pieces = 8;
  std::uint64_t seed = 1;
};

/// max over seeded probes chi (piecewise constant, standard normal values,
/// normalized to normIn(chi) = 1) of normOut(op(chi)). `applyAndMeasure`
/// returns normOut(op(chi)).
LinearOperatorProbe estimateOperatorNorm(
    const std::function<double(const PiecewiseFunction&)>& applyAndMeasure,
    const std::function<double(const PiecewiseFunction&)>& normIn,
    const ProbeSpec& spec);

/// ||y(phi + chi) - y(phi) - B chi||_{C[-R, T]}.
double frechetRemainder(const DerivativeContext& ctx, const HistoryElement& chi,
                        const QuadratureConfig& cfg);

/// The A-form remainder x(phi + chi) - x(phi) - A chi on [-R, T].
PiecewiseFunction quotientRemainder(const DerivativeContext& ctx,
                                    const HistoryElement& chi,
                                    const QuadratureConfig& cfg);

/// Rows k = 0..K for chi_k = 2^{-k} chi0: input ||chi_k||_{L^{alpha+1}},
/// output the Frechet remainder, ratio output/input. When Df is globally
/// Lipschitz, `bound` is (1/2) lip(Df) ||chi_k||_{L^2}^2.
RemainderTable remainderSchedule(const DerivativeContext& ctx,
                                 const HistoryElement& chi0, int K,
                                 const QuadratureConfig& cfg);

/// || (y(phi + h chi) - y(phi)) / h - B chi ||_{C[-R, T]}.
double gateauxDefect(const DerivativeContext& ctx, const HistoryElement& chi,
                     double h, const QuadratureConfig& cfg);

struct BContinuity {
  /// Probed lower bound on ||B_phi - B_phi0||.
  double operatorGapLowerBound = 0.0;
  /// ||Df o phi - Df o phi0||_{L^q[-R, 0]}.
  double holderBound = 0.0;
};

BContinuity bContinuity(const DerivativeContext& ctx, const HistoryElement& phi,
                        const HistoryElement& phi0, const QuadratureConfig& cfg,
                        int probes = 16, std::uint64_t seed = 7);

}  // namespace lpdde
