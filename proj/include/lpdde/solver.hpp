#pragma once

#include <vector>

#include "lpdde/histspace.hpp"
#include "lpdde/nonlinear.hpp"
#include "lpdde/schedule.hpp"

namespace lpdde {

/// Initial value problem x'(t) = f(x(t - r)) for t >= 0, x = phi on [-R, 0].
struct Problem {
  HistoryConfig cfg;
  Nonlinearity nl;
  double r = 1.0;
  HistoryElement phi;

  void validate() const;
  Problem withHistory(HistoryElement history) const;
};

/// Solution x(.; phi, r) on [-R, T].
struct Trajectory {
  PiecewiseFunction x;
  Problem problem;
  double T = 0.0;
  /// 0, r, 2r, ... up to and including T.
  std::vector<double> stepBoundaries;
  /// Largest relative interpolation defect of any integrand piece.
  double integrationDefect = 0.0;
};

/// One step of the method of steps: the solution on [-R, r].
Trajectory solveStep(const Problem& pb, const QuadratureConfig& cfg);

/// Method of steps on [0, T]. Step k integrates f(x(s - r)) over
/// [kr, min((k+1)r, T)], partitioned at the breakpoints of the already known
/// solution shifted by r.
Trajectory solve(const Problem& pb, double T, const QuadratureConfig& cfg);

/// y = x - staticProlongation(phi, T) on [-R, T]; y vanishes on [-R, 0].
PiecewiseFunction decompose(const Trajectory& traj);
PiecewiseFunction decompose(const Trajectory& traj, double T);

/// The history functional F(phi, r) = f(phi(-r)).
Vector historyFunctional(const Nonlinearity& nl, const HistoryElement& phi,
                         double r);

/// One-step dependence data for two histories under the same (nl, r), T <= r.
struct DependenceSample {
  /// ||y(.; phi1) - y(.; phi2)||_{C[-R, T]}.
  double yGap = 0.0;
  /// ||f o phi1 - f o phi2||_{L^1[-R, 0]}, a bound on yGap.
  double compositionGap = 0.0;
};

DependenceSample dependenceSample(const Problem& pb, const HistoryElement& other,
                                  double T, const QuadratureConfig& cfg);

/// Rows k = 0..K for phi_k = phi + 2^{-k} (phi0 - phi): input
/// ||phi_k - phi||_{L^{alpha_f}} (exponent clamped to >= 1), output the y-gap,
/// bound the composition gap.
ScheduleTable dependenceSchedule(const Problem& pb, const HistoryElement& phi0,
                                 double T, int K, const QuadratureConfig& cfg);

struct LipschitzSample {
  /// barNorm at p = 1 of x(.; phi1) - x(.; phi2) over [-R, T].
  double solutionGap = 0.0;
  /// seminorm at p = 1 of phi1 - phi2.
  double historyGap = 0.0;
  double ratio = 0.0;
  /// lip(f) T / (T + R + 1) + (1 + T).
  double statedConstant = 0.0;
  /// (1 + lip(f)) (1 + T).
  double soundConstant = 0.0;
};

/// Needs a globally Lipschitz f and T <= r.
LipschitzSample lipschitzSample(const Problem& pb, const HistoryElement& other,
                                double T, const QuadratureConfig& cfg);

}  // namespace lpdde
