#include "lpdde/histspace.hpp"

#include <string>

namespace lpdde {

void HistoryConfig::validate() const {
  if (!(R > 0.0)) {
    throw ParameterError("HistoryConfig: R must be positive");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ParameterError("HistoryConfig: p must satisfy 1 <= p < inf");
  }
  if (N < 1) {
    throw ParameterError("HistoryConfig: N must be >= 1");
  }
}

HistoryElement::HistoryElement(PiecewiseFunction rep) : rep_(std::move(rep)) {
  if (rep_.upper() != 0.0) {
    rep_ = snapDomain(rep_, rep_.lower(), 0.0);
  }
  if (!(rep_.lower() < 0.0)) {
    throw DomainError("HistoryElement: domain must be [-R, 0] with R > 0");
  }
}

HistoryElement HistoryElement::constant(double R, const Vector& value) {
  return HistoryElement(PiecewiseFunction::constant(-R, 0.0, value));
}

HistoryElement HistoryElement::zero(double R, int dim) {
  return constant(R, Vector::Zero(dim));
}

HistoryElement operator+(const HistoryElement& a, const HistoryElement& b) {
  return HistoryElement(add(a.rep_, b.rep_));
}

HistoryElement operator-(const HistoryElement& a, const HistoryElement& b) {
  return HistoryElement(subtract(a.rep_, b.rep_));
}

HistoryElement operator*(double s, const HistoryElement& a) {
  return HistoryElement(scale(a.rep_, s));
}

namespace {

double combinePowers(double integral, double endpoint, double p) {
  return std::pow(std::pow(integral, p) + std::pow(endpoint, p), 1.0 / p);
}

}  // namespace

double seminorm(const HistoryElement& phi, const HistoryConfig& cfg,
                const QuadratureConfig& q) {
  cfg.validate();
  if (phi.dim() != cfg.N) {
    throw DimensionError("seminorm: element has " + std::to_string(phi.dim()) +
                         " components, config says N = " +
                         std::to_string(cfg.N));
  }
  if (std::abs(phi.R() - cfg.R) > kBreakpointTolerance * std::max(1.0, cfg.R)) {
    throw DimensionError("seminorm: element lives on [-" +
                         std::to_string(phi.R()) + ", 0], config says R = " +
                         std::to_string(cfg.R));
  }
  return barNorm(phi.rep(), cfg.p, q);
}

double barNorm(const PiecewiseFunction& x, double p, const QuadratureConfig& q) {
  detail::requireExponent(p);
  return combinePowers(lpNorm(x, p, q), x.endpointValue().norm(), p);
}

double pairNorm(const QuotientPair& pair, double p, const QuadratureConfig& q) {
  detail::requireExponent(p);
  return combinePowers(lpNorm(pair.aeClass, p, q), pair.eta.norm(), p);
}

PiecewiseFunction staticProlongation(const HistoryElement& phi, double T) {
  if (!(T > 0.0)) {
    throw DomainError("staticProlongation: T must be positive");
  }
  return join(phi.rep(),
              PiecewiseFunction::constant(0.0, T, phi.valueAtZero()));
}

HistoryElement historySegment(const PiecewiseFunction& x, double t) {
  const double R = -x.lower();
  const double T = x.upper();
  const double tol = kBreakpointTolerance * std::max({1.0, R, T});
  if (!(R > 0.0) || t < -tol || t > T + tol) {
    throw DomainError("historySegment: t = " + std::to_string(t) +
                      " outside [0, " + std::to_string(T) + "]");
  }
  t = std::clamp(t, 0.0, T);
  PiecewiseFunction window = restrict(x, t - R, t).withEndpointValue(x.evaluate(t));
  return HistoryElement(snapDomain(shift(window, -t), -R, 0.0));
}

HistoryElement isoToQuotient(const QuotientPair& pair) {
  if (pair.eta.size() != pair.aeClass.dim()) {
    throw DimensionError("isoToQuotient: eta dimension mismatch");
  }
  return HistoryElement(pair.aeClass.withEndpointValue(pair.eta));
}

QuotientPair isoFromQuotient(const HistoryElement& phi) {
  const PiecewiseFunction& rep = phi.rep();
  // The a.e. class carries no meaningful endpoint; use the polynomial limit.
  PiecewiseFunction ae =
      rep.withEndpointValue(rep.evaluatePiece(rep.pieceCount() - 1, 0.0));
  return {std::move(ae), phi.valueAtZero()};
}

bool sameClass(const HistoryElement& phi, const HistoryElement& psi,
               const HistoryConfig& cfg, const QuadratureConfig& q,
               double tolerance) {
  return seminorm(phi - psi, cfg, q) <= tolerance;
}

}  // namespace lpdde
