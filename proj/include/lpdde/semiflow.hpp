#pragma once

#include <cstdint>
#include <vector>

#include "lpdde/derivops.hpp"
#include "lpdde/schedule.hpp"
#include "lpdde/solver.hpp"

namespace lpdde {

/// (t, phi) -> R_t x(.; phi, r) on the history space. Every call re-solves
/// from phi.
class Semiflow {
 public:
  Semiflow(HistoryConfig cfg, Nonlinearity nl, double r);

  const HistoryConfig& config() const { return cfg_; }
  const Nonlinearity& nonlinearity() const { return nl_; }
  double delay() const { return r_; }

  /// Always +inf: the method of steps never breaks down for this equation.
  double escapeTime(const HistoryElement& phi) const;

  Problem problem(const HistoryElement& phi) const;

  HistoryElement evolve(double t, const HistoryElement& phi,
                        const QuadratureConfig& q) const;

 private:
  HistoryConfig cfg_;
  Nonlinearity nl_;
  double r_;
};

/// seminorm(evolve(0, phi) - phi).
double identityDefect(const Semiflow& sf, const HistoryElement& phi,
                      const QuadratureConfig& q);

/// seminorm(evolve(t + s, phi) - evolve(s, evolve(t, phi))).
double semigroupDefect(const Semiflow& sf, double t, double s,
                       const HistoryElement& phi, const QuadratureConfig& q);

/// seminorm(evolve(t, phi) - evolve(t, psi)); throws ContractError unless
/// phi and psi are in the same class.
double quotientInvariance(const Semiflow& sf, double t, const HistoryElement& phi,
                          const HistoryElement& psi, const QuadratureConfig& q);

/// Distance of two classes computed as a pair norm and as a seminorm.
struct QuotientDistance {
  double pair = 0.0;
  double seminorm = 0.0;
};

QuotientDistance quotientDistance(const HistoryElement& phi,
                                  const HistoryElement& psi,
                                  const HistoryConfig& cfg,
                                  const QuadratureConfig& q);

/// One column of the continuity modulus: rows k = 0..K for
/// phi_k = phi + 2^{-k} d0, input seminorm(phi_k - phi), output
/// seminorm(evolve(t, phi_k) - evolve(t, phi)) and bound
/// (R+1)^{1/p} ||y_k - y||_{C[-R, t]} + (1+t)^{1/p} seminorm(phi_k - phi).
struct ModulusColumn {
  double t = 0.0;
  ScheduleTable table;
};

std::vector<ModulusColumn> continuityModulus(const Semiflow& sf,
                                             const std::vector<double>& tGrid,
                                             const HistoryElement& phi,
                                             const HistoryElement& d0, int K,
                                             const QuadratureConfig& q);

/// Rows k = 0..K for chi_k = 2^{-k} chi0, 0 < t <= r: input seminorm(chi_k),
/// output seminorm(evolve(t, phi + chi_k) - evolve(t, phi) - R_t A chi_k).
/// When Df is globally Lipschitz the row bound is
/// (min(t, R) + 1)^{1/p} (1/2) lip(Df) ||chi_k||_{L^2}^2.
RemainderTable timeTDerivativeRemainder(const Semiflow& sf, double t,
                                        const HistoryElement& phi,
                                        const HistoryElement& chi0, int K,
                                        const QuadratureConfig& q);

/// Norm of chi -> R_t A chi on the history space, probed and bounded.
struct ABoundedness {
  /// Largest seminorm(R_t A chi) / seminorm(chi) over the probes.
  double probedNorm = 0.0;
  /// (1 + t)^{1/p} + (R + 1)^{1/p}.
  double statedConstant = 0.0;
  /// (1 + t)^{1/p} + (R + 1)^{1/p} R^{1/(alpha+1) - 1/p} ||Df o phi||_{L^q}.
  double soundConstant = 0.0;
};

ABoundedness aBoundedness(const Semiflow& sf, double t, const HistoryElement& phi,
                          const QuadratureConfig& q, int probes = 16,
                          std::uint64_t seed = 17);

/// ||R_t A_phi - R_t A_phi0|| on the history space, probed, against
/// (R+1)^{1/p} R^{1/(alpha+1) - 1/p} ||Df o phi - Df o phi0||_{L^q}.
struct DerivativeContinuity {
  double probedGap = 0.0;
  double bound = 0.0;
};

DerivativeContinuity timeTDerivativeContinuity(const Semiflow& sf, double t,
                                               const HistoryElement& phi,
                                               const HistoryElement& phi0,
                                               const QuadratureConfig& q,
                                               int probes = 16,
                                               std::uint64_t seed = 19);

struct SemiflowReport {
  double identity = 0.0;
  /// Largest semigroup defect over the (t, s) grid.
  double semigroup = 0.0;
  double quotient = 0.0;
  std::vector<ModulusColumn> modulus;
  RemainderTable remainder;
};

}  // namespace lpdde
