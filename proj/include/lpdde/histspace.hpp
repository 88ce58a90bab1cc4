#pragma once

#include "lpdde/funcrep.hpp"

namespace lpdde {

/// Maximal delay R, integrability exponent p and state dimension N.
struct HistoryConfig {
  double R = 1.0;
  double p = 2.0;
  int N = 1;

  void validate() const;
};

/// An element of the history space: a representative on [-R, 0] whose value
/// at 0 is distinguished. Two elements are identified when the seminorm of
/// their difference vanishes (equal a.e. and equal at 0).
class HistoryElement {
 public:
  /// `rep` must live on [-R, 0] for some R > 0.
  explicit HistoryElement(PiecewiseFunction rep);

  static HistoryElement constant(double R, const Vector& value);
  static HistoryElement zero(double R, int dim);

  const PiecewiseFunction& rep() const { return rep_; }
  double R() const { return -rep_.lower(); }
  int dim() const { return rep_.dim(); }
  const Vector& valueAtZero() const { return rep_.endpointValue(); }
  Vector operator()(double theta) const { return rep_.evaluate(theta); }

  friend HistoryElement operator+(const HistoryElement& a,
                                  const HistoryElement& b);
  friend HistoryElement operator-(const HistoryElement& a,
                                  const HistoryElement& b);
  friend HistoryElement operator*(double s, const HistoryElement& a);

 private:
  PiecewiseFunction rep_;
};

/// ([phi]_a.e., eta): an a.e.-class together with a separate endpoint value.
struct QuotientPair {
  PiecewiseFunction aeClass;
  Vector eta;
};

/// (||phi||_{L^p[-R,0]}^p + |phi(0)|^p)^{1/p}.
double seminorm(const HistoryElement& phi, const HistoryConfig& cfg,
                const QuadratureConfig& q);

/// (||x||_{L^p[a,b]}^p + |x(b)|^p)^{1/p} on the domain of x.
double barNorm(const PiecewiseFunction& x, double p, const QuadratureConfig& q);

/// Norm of a quotient pair, (||aeClass||_p^p + |eta|^p)^{1/p}.
double pairNorm(const QuotientPair& pair, double p, const QuadratureConfig& q);

/// phi on [-R, 0] extended by the constant phi(0) on [0, T]. A breakpoint is
/// always placed at 0.
PiecewiseFunction staticProlongation(const HistoryElement& phi, double T);

/// R_t x: theta -> x(t + theta) on [-R, 0], with distinguished value x(t).
/// `x` lives on [-R, T] and 0 <= t <= T.
HistoryElement historySegment(const PiecewiseFunction& x, double t);

HistoryElement isoToQuotient(const QuotientPair& pair);
QuotientPair isoFromQuotient(const HistoryElement& phi);

/// Operational class equality: seminorm(phi - psi) <= tolerance.
bool sameClass(const HistoryElement& phi, const HistoryElement& psi,
               const HistoryConfig& cfg, const QuadratureConfig& q,
               double tolerance = 1e-12);

}  // namespace lpdde
