#include "lpdde/solver.hpp"

#include <string>

namespace lpdde {

void Problem::validate() const {
  cfg.validate();
  if (!(r > 0.0) || r > cfg.R * (1.0 + kBreakpointTolerance)) {
    throw ParameterError("Problem: delay r = " + std::to_string(r) +
                         " must lie in (0, R]");
  }
  if (nl.dimIn != cfg.N || nl.dimOut != cfg.N) {
    throw DimensionError("Problem: nonlinearity '" + nl.name +
                         "' does not map R^N to R^N");
  }
  if (phi.dim() != cfg.N) {
    throw DimensionError("Problem: history dimension differs from N");
  }
  if (std::abs(phi.R() - cfg.R) > kBreakpointTolerance * std::max(1.0, cfg.R)) {
    throw DimensionError("Problem: history is not defined on [-R, 0]");
  }
}

Problem Problem::withHistory(HistoryElement history) const {
  Problem out = *this;
  out.phi = std::move(history);
  return out;
}

Trajectory solveStep(const Problem& pb, const QuadratureConfig& cfg) {
  return solve(pb, pb.r, cfg);
}

Trajectory solve(const Problem& pb, double T, const QuadratureConfig& cfg) {
  pb.validate();
  cfg.validate();
  if (!(T > 0.0)) {
    throw DomainError("solve: horizon T must be positive");
  }
  const double r = pb.r;
  const double snap = kBreakpointTolerance * std::max(1.0, T);

  Trajectory traj{pb.phi.rep(), pb, T, {0.0}, 0.0};
  PiecewiseFunction& x = traj.x;
  double t = 0.0;
  for (int k = 1; t < T - snap; ++k) {
    double next = k * r;
    if (next > T - snap) {
      next = T;
    }
    const PiecewiseFunction source = restrict(x, t - r, next - r);
    const LazyComposition integrand =
        LazyComposition(source, pb.nl.eval, pb.cfg.N).shifted(r);
    CumulativeIntegral step =
        cumulativeIntegral(integrand, x.evaluate(t), cfg);
    traj.integrationDefect = std::max(traj.integrationDefect, step.defect);
    x = join(x, snapDomain(step.function, t, next));
    traj.stepBoundaries.push_back(next);
    t = next;
  }
  return traj;
}

PiecewiseFunction decompose(const Trajectory& traj) {
  return decompose(traj, traj.T);
}

PiecewiseFunction decompose(const Trajectory& traj, double T) {
  if (!(T > 0.0) || T > traj.T * (1.0 + kBreakpointTolerance)) {
    throw DomainError("decompose: T must lie in (0, horizon]");
  }
  const PiecewiseFunction x =
      T < traj.T ? restrict(traj.x, traj.x.lower(), T) : traj.x;
  PiecewiseFunction y = subtract(x, staticProlongation(traj.problem.phi, T));
  // On [-R, 0] both terms share every piece, so the difference is exact;
  // force the canonical zero representative there.
  return join(PiecewiseFunction::zero(y.lower(), 0.0, y.dim()),
              restrict(y, 0.0, T));
}

Vector historyFunctional(const Nonlinearity& nl, const HistoryElement& phi,
                         double r) {
  if (!(r > 0.0) || r > phi.R() * (1.0 + kBreakpointTolerance)) {
    throw ParameterError("historyFunctional: r must lie in (0, R]");
  }
  return nl(phi(-r));
}

namespace {

void requireOneStep(const Problem& pb, double T, const char* op) {
  if (!(T > 0.0) || T > pb.r * (1.0 + kBreakpointTolerance)) {
    throw ParameterError(std::string(op) + ": T must lie in (0, r]");
  }
}

}  // namespace

DependenceSample dependenceSample(const Problem& pb, const HistoryElement& other,
                                  double T, const QuadratureConfig& cfg) {
  requireOneStep(pb, T, "dependenceSample");
  const Problem pb2 = pb.withHistory(other);
  pb2.validate();
  DependenceSample out;
  out.yGap = supNorm(subtract(decompose(solve(pb, T, cfg)),
                              decompose(solve(pb2, T, cfg))),
                     cfg);
  const Nonlinearity& nl = pb.nl;
  const int n = pb.cfg.N;
  const LazyComposition gap(
      stack(pb.phi.rep(), other.rep()),
      [nl, n](const Vector& z) -> Vector { return nl(z.head(n)) - nl(z.tail(n)); },
      n);
  out.compositionGap = lpNorm(gap, 1.0, cfg);
  return out;
}

ScheduleTable dependenceSchedule(const Problem& pb, const HistoryElement& phi0,
                                 double T, int K, const QuadratureConfig& cfg) {
  requireOneStep(pb, T, "dependenceSchedule");
  if (K < 0) {
    throw ParameterError("dependenceSchedule: K must be >= 0");
  }
  const double exponent = std::max(1.0, pb.nl.fGrowth.alpha);
  const HistoryElement direction = phi0 - pb.phi;
  ScheduleTable table;
  for (int k = 0; k <= K; ++k) {
    const HistoryElement d = std::ldexp(1.0, -k) * direction;
    const DependenceSample s = dependenceSample(pb, pb.phi + d, T, cfg);
    ScheduleRow row;
    row.input = lpNorm(d.rep(), exponent, cfg);
    row.output = s.yGap;
    row.ratio = row.input > 0.0 ? row.output / row.input : 0.0;
    row.bound = s.compositionGap;
    table.rows.push_back(row);
  }
  return table;
}

LipschitzSample lipschitzSample(const Problem& pb, const HistoryElement& other,
                                double T, const QuadratureConfig& cfg) {
  requireOneStep(pb, T, "lipschitzSample");
  if (!pb.nl.lipschitz) {
    throw ContractError("lipschitzSample: '" + pb.nl.name +
                        "' is not certified globally Lipschitz");
  }
  const double lip = *pb.nl.lipschitz;
  const double R = pb.cfg.R;
  LipschitzSample out;
  const Trajectory a = solve(pb, T, cfg);
  const Trajectory b = solve(pb.withHistory(other), T, cfg);
  out.solutionGap = barNorm(subtract(a.x, b.x), 1.0, cfg);
  out.historyGap = barNorm((pb.phi - other).rep(), 1.0, cfg);
  out.ratio = out.historyGap > 0.0 ? out.solutionGap / out.historyGap : 0.0;
  out.statedConstant = lip * T / (T + R + 1.0) + (1.0 + T);
  out.soundConstant = (1.0 + lip) * (1.0 + T);
  return out;
}

}  // namespace lpdde
