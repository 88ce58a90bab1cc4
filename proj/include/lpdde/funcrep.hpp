#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "lpdde/errors.hpp"
#include "lpdde/quadrature.hpp"

namespace lpdde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Pointwise map R^M -> R^K applied inside a LazyComposition.
using PointMap = std::function<Vector(const Vector&)>;

/// Two breakpoints closer than this (relative to the interval scale) are
/// treated as the same point.
inline constexpr double kBreakpointTolerance = 1e-12;

/// A vector-valued polynomial on [left, right], stored as a Chebyshev series
/// in the local variable u = (2t - left - right) / (right - left).
/// Column k of `coefficients` multiplies T_k(u).
class ChebPiece {
 public:
  ChebPiece(double left, double right, Matrix coefficients);

  static ChebPiece constant(double left, double right, const Vector& value);

  /// Interpolates g at `nodes` Chebyshev points of the first kind; the result
  /// has degree nodes - 1. Endpoints are never sampled.
  static ChebPiece interpolate(double left, double right, int dim, int nodes,
                               const std::function<Vector(double)>& g);

  Vector operator()(double t) const;

  double left() const { return left_; }
  double right() const { return right_; }
  double length() const { return right_ - left_; }
  int dim() const { return static_cast<int>(coeffs_.rows()); }
  int degree() const { return static_cast<int>(coeffs_.cols()) - 1; }
  const Matrix& coefficients() const { return coeffs_; }

  /// Same polynomial, re-expanded on [left, right] (a sub-interval).
  ChebPiece restricted(double left, double right) const;
  ChebPiece shifted(double dt) const;
  /// Moves the interval ends without touching the coefficients; used to
  /// snap floating-point drift of breakpoints.
  ChebPiece relabeled(double left, double right) const;
  ChebPiece scaled(double factor) const;
  /// Exact antiderivative whose value at `left` is `valueAtLeft`.
  ChebPiece antiderivative(const Vector& valueAtLeft) const;

 private:
  double left_;
  double right_;
  Matrix coeffs_;
};

/// A piecewise-polynomial representative of an R^N-valued function on a
/// closed interval [a, b].
///
/// Evaluation at an interior point t uses the piece whose half-open interval
/// [t_i, t_{i+1}) contains t; evaluation at b returns the distinguished
/// `endpointValue`, which need not equal the left limit of the last piece.
/// Finitely many interior point values may additionally be overridden
/// (`withPointValue`); such edits live on a null set and are invisible to
/// every integral.
class PiecewiseFunction {
 public:
  PiecewiseFunction(std::vector<ChebPiece> pieces, Vector endpointValue);

  static PiecewiseFunction constant(double a, double b, const Vector& value);
  static PiecewiseFunction zero(double a, double b, int dim);

  /// `values[i]` is the constant on [breakpoints[i], breakpoints[i+1]).
  static PiecewiseFunction piecewiseConstant(std::vector<double> breakpoints,
                                             const std::vector<Vector>& values,
                                             Vector endpointValue);

  /// `coefficients[piece][component][k]` multiplies t^k, in the global
  /// variable t.
  static PiecewiseFunction fromMonomials(
      std::vector<double> breakpoints,
      const std::vector<std::vector<std::vector<double>>>& coefficients,
      Vector endpointValue);

  double lower() const { return breakpoints_.front(); }
  double upper() const { return breakpoints_.back(); }
  int dim() const { return pieces_.front().dim(); }
  std::size_t pieceCount() const { return pieces_.size(); }
  int maxDegree() const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<ChebPiece>& pieces() const { return pieces_; }
  const ChebPiece& piece(std::size_t i) const { return pieces_[i]; }
  const Vector& endpointValue() const { return endpointValue_; }
  const std::vector<std::pair<double, Vector>>& pointValues() const {
    return pointValues_;
  }

  /// Index of the piece whose half-open interval contains t (the last piece
  /// for t = b).
  std::size_t pieceIndex(double t) const;

  Vector evaluate(double t) const;
  /// The polynomial of piece i at t, ignoring point overrides and the
  /// distinguished endpoint.
  Vector evaluatePiece(std::size_t i, double t) const { return pieces_[i](t); }

  PiecewiseFunction withEndpointValue(Vector value) const;
  PiecewiseFunction withPointValue(double t, Vector value) const;
  /// Drops interior point overrides.
  PiecewiseFunction withoutPointValues() const;

  /// Largest jump |p_{i-1}(t_i) - p_i(t_i)| over the interior breakpoints in
  /// [from, b), plus the mismatch between the last piece and endpointValue.
  double continuityDefect(double from) const;

 private:
  std::vector<ChebPiece> pieces_;
  std::vector<double> breakpoints_;
  Vector endpointValue_;
  std::vector<std::pair<double, Vector>> pointValues_;
};

/// f composed with a pointwise map, evaluated on demand. Breakpoints are
/// those of the base.
class LazyComposition {
 public:
  LazyComposition(PiecewiseFunction base, PointMap map, int outDim);

  Vector evaluate(double t) const { return map_(base_.evaluate(t)); }
  Vector evaluatePiece(std::size_t i, double t) const {
    return map_(base_.evaluatePiece(i, t));
  }

  double lower() const { return base_.lower(); }
  double upper() const { return base_.upper(); }
  int dim() const { return outDim_; }
  std::size_t pieceCount() const { return base_.pieceCount(); }
  const std::vector<double>& breakpoints() const { return base_.breakpoints(); }
  const PiecewiseFunction& base() const { return base_; }
  const PointMap& map() const { return map_; }

  LazyComposition shifted(double r) const;

 private:
  PiecewiseFunction base_;
  PointMap map_;
  int outDim_;
};

/// Anything that can be integrated piece by piece.
template <class F>
concept PiecewiseIntegrand = requires(const F& f, std::size_t i, double t) {
  { f.evaluatePiece(i, t) } -> std::convertible_to<Vector>;
  { f.evaluate(t) } -> std::convertible_to<Vector>;
  { f.breakpoints() } -> std::convertible_to<const std::vector<double>&>;
  { f.pieceCount() } -> std::convertible_to<std::size_t>;
};

// ---------------------------------------------------------------------------
// Algebra

/// t -> f(t - r) on [a + r, b + r].
PiecewiseFunction shift(const PiecewiseFunction& f, double r);
PiecewiseFunction add(const PiecewiseFunction& f, const PiecewiseFunction& g);
PiecewiseFunction subtract(const PiecewiseFunction& f,
                           const PiecewiseFunction& g);
PiecewiseFunction scale(const PiecewiseFunction& f, double factor);
/// a f + b g.
PiecewiseFunction combine(double a, const PiecewiseFunction& f, double b,
                          const PiecewiseFunction& g);

/// Restriction to [lo, hi]. The new endpoint value is the polynomial limit
/// at hi, unless hi is the old right endpoint (the distinguished value is
/// kept) or hi carries a point override.
PiecewiseFunction restrict(const PiecewiseFunction& f, double lo, double hi);

/// Glues `left` on [a, c] and `right` on [c, b]. The value at c comes from
/// `right`; the distinguished value of `left` is discarded.
PiecewiseFunction join(const PiecewiseFunction& left,
                       const PiecewiseFunction& right);

/// Component-wise stacking [f; g] on the merged breakpoints.
PiecewiseFunction stack(const PiecewiseFunction& f, const PiecewiseFunction& g);

/// Forces the domain ends to exactly [a, b]; both must already be within
/// breakpoint tolerance of the current ends.
PiecewiseFunction snapDomain(const PiecewiseFunction& f, double a, double b);

/// Union of two sorted breakpoint lists with near-duplicates collapsed.
std::vector<double> mergeBreakpoints(const std::vector<double>& x,
                                     const std::vector<double>& y);

/// Re-expresses f on a refinement of its breakpoints.
PiecewiseFunction refine(const PiecewiseFunction& f,
                         const std::vector<double>& breakpoints);

// ---------------------------------------------------------------------------
// Interpolation and integration

struct MaterializeResult {
  PiecewiseFunction function;
  /// Largest sampled |interpolant - g| over all pieces.
  double defect = 0.0;
};

/// Per-piece Chebyshev interpolant of g at degree + 1 nodes.
MaterializeResult materialize(const LazyComposition& g, int degree,
                              const QuadratureConfig& cfg);

struct CumulativeIntegral {
  /// G(t) = initial + int_{a}^{t} g(s) ds on [a, b], continuous.
  PiecewiseFunction function;
  /// Largest sampled interpolation defect of the integrand, relative to
  /// (1 + |g|).
  double defect = 0.0;
};

/// Cumulative integral of a lazy integrand. Each piece is interpolated at
/// cfg.nodesPerPiece Chebyshev nodes and antidifferentiated exactly; pieces
/// whose interpolation defect exceeds cfg.tolerance are bisected up to
/// cfg.maxBisections times.
CumulativeIntegral cumulativeIntegral(const LazyComposition& g,
                                      const Vector& initial,
                                      const QuadratureConfig& cfg);

// ---------------------------------------------------------------------------
// Norms

namespace detail {
void requireExponent(double p);
std::vector<double> lobattoSamples(double left, double right, int n);
}  // namespace detail

/// (int_a^b |f|^p)^{1/p} with |.| the Euclidean norm, by composite
/// Gauss-Legendre quadrature on each piece.
template <PiecewiseIntegrand F>
double lpNorm(const F& f, double p, const QuadratureConfig& cfg) {
  detail::requireExponent(p);
  const GaussRule& rule = gaussLegendre(cfg.nodesPerPiece);
  const auto& bps = f.breakpoints();
  long double total = 0.0L;
  for (std::size_t i = 0; i < f.pieceCount(); ++i) {
    const double lo = bps[i];
    const double hi = bps[i + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    long double piece = 0.0L;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double magnitude =
          Vector(f.evaluatePiece(i, mid + half * rule.nodes[k])).norm();
      const long double m = magnitude;
      piece += rule.weights[k] *
               (p == 1.0 ? m : (p == 2.0 ? m * m : std::pow(m, static_cast<long double>(p))));
    }
    total += static_cast<long double>(half) * piece;
  }
  return static_cast<double>(p == 1.0 ? total : std::pow(total, 1.0L / p));
}

struct SupNormReport {
  double value = 0.0;
  /// Lobatto samples per piece used by the accepted estimate.
  int samplesPerPiece = 0;
  /// Change between the last two grids.
  double lastChange = 0.0;
};

/// Max of |f| over Chebyshev-Lobatto grids on every piece (including both
/// piece ends) and the distinguished endpoint. The grid is doubled until two
/// successive estimates agree within cfg.tolerance; the value is an
/// under-approximation of the true supremum.
template <PiecewiseIntegrand F>
SupNormReport supNormReport(const F& f, const QuadratureConfig& cfg) {
  const auto& bps = f.breakpoints();
  auto sample = [&](int n) {
    double best = Vector(f.evaluate(bps.back())).norm();
    for (std::size_t i = 0; i < f.pieceCount(); ++i) {
      for (double t : detail::lobattoSamples(bps[i], bps[i + 1], n)) {
        best = std::max(best, Vector(f.evaluatePiece(i, t)).norm());
      }
    }
    return best;
  };
  SupNormReport report;
  int n = cfg.supSamplesPerPiece;
  double current = sample(n);
  for (int doubling = 0; doubling < 6; ++doubling) {
    const double next = sample(2 * n);
    report.lastChange = next - current;
    current = next;
    n *= 2;
    if (report.lastChange <= cfg.tolerance * std::max(1.0, current)) {
      break;
    }
  }
  report.value = current;
  report.samplesPerPiece = n;
  return report;
}

template <PiecewiseIntegrand F>
double supNorm(const F& f, const QuadratureConfig& cfg) {
  return supNormReport(f, cfg).value;
}

// ---------------------------------------------------------------------------
// Random generation (seeded; used for probes and corpora)

/// Piecewise-constant function on [a, b] with `pieces` equal pieces whose
/// values (and the endpoint value) are i.i.d. standard normal.
PiecewiseFunction randomPiecewiseConstant(double a, double b, int dim,
                                          int pieces, std::mt19937_64& rng);

/// Piecewise polynomial on [a, b] with 1..maxPieces pieces at random
/// breakpoints, degrees 0..maxDegree and standard-normal Chebyshev
/// coefficients scaled by `amplitude` / (k + 1).
PiecewiseFunction randomPiecewisePolynomial(double a, double b, int dim,
                                            int maxPieces, int maxDegree,
                                            double amplitude,
                                            std::mt19937_64& rng);

}  // namespace lpdde
