#include "lpdde/funcrep.hpp"

#include <numbers>
#include <string>

namespace lpdde {

namespace {

double scaleOf(double a, double b) {
  return std::max({1.0, std::abs(a), std::abs(b)});
}

bool near(double x, double y, double scale) {
  return std::abs(x - y) <= kBreakpointTolerance * scale;
}

Matrix padColumns(const Matrix& m, Eigen::Index cols) {
  if (m.cols() == cols) {
    return m;
  }
  Matrix out = Matrix::Zero(m.rows(), cols);
  out.leftCols(m.cols()) = m;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ChebPiece

ChebPiece::ChebPiece(double left, double right, Matrix coefficients)
    : left_(left), right_(right), coeffs_(std::move(coefficients)) {
  if (!(right_ > left_)) {
    throw DomainError("ChebPiece: empty interval [" + std::to_string(left_) +
                      ", " + std::to_string(right_) + "]");
  }
  if (coeffs_.rows() < 1 || coeffs_.cols() < 1) {
    throw DimensionError("ChebPiece: empty coefficient matrix");
  }
}

ChebPiece ChebPiece::constant(double left, double right, const Vector& value) {
  return ChebPiece(left, right, Matrix(value));
}

ChebPiece ChebPiece::interpolate(double left, double right, int dim, int nodes,
                                 const std::function<Vector(double)>& g) {
  const std::vector<double> u = chebyshevNodes(nodes);
  const double half = 0.5 * (right - left);
  const double mid = 0.5 * (right + left);
  Matrix values(dim, nodes);
  for (int j = 0; j < nodes; ++j) {
    values.col(j) = g(mid + half * u[j]);
  }
  Matrix coeffs = Matrix::Zero(dim, nodes);
  for (int k = 0; k < nodes; ++k) {
    for (int j = 0; j < nodes; ++j) {
      coeffs.col(k) +=
          values.col(j) * std::cos(std::numbers::pi * k * (j + 0.5) / nodes);
    }
    coeffs.col(k) *= 2.0 / nodes;
  }
  coeffs.col(0) *= 0.5;
  return ChebPiece(left, right, std::move(coeffs));
}

Vector ChebPiece::operator()(double t) const {
  const double u = (2.0 * t - left_ - right_) / (right_ - left_);
  const Eigen::Index n = coeffs_.cols();
  if (n == 1) {
    return coeffs_.col(0);
  }
  // Clenshaw recurrence.
  Vector b1 = Vector::Zero(coeffs_.rows());
  Vector b2 = Vector::Zero(coeffs_.rows());
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    Vector b0 = coeffs_.col(k) + 2.0 * u * b1 - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return coeffs_.col(0) + u * b1 - b2;
}

ChebPiece ChebPiece::restricted(double left, double right) const {
  const double scale = scaleOf(left_, right_);
  if (near(left, left_, scale) && near(right, right_, scale)) {
    return relabeled(left, right);
  }
  if (degree() == 0) {
    return ChebPiece(left, right, coeffs_);
  }
  return interpolate(left, right, dim(), degree() + 1,
                     [this](double t) { return (*this)(t); });
}

ChebPiece ChebPiece::shifted(double dt) const {
  return ChebPiece(left_ + dt, right_ + dt, coeffs_);
}

ChebPiece ChebPiece::relabeled(double left, double right) const {
  return ChebPiece(left, right, coeffs_);
}

ChebPiece ChebPiece::scaled(double factor) const {
  return ChebPiece(left_, right_, coeffs_ * factor);
}

ChebPiece ChebPiece::antiderivative(const Vector& valueAtLeft) const {
  const Eigen::Index n = coeffs_.cols();
  Matrix out = Matrix::Zero(coeffs_.rows(), n + 1);
  // int T_0 = T_1, int T_1 = T_2 / 4, int T_k = T_{k+1}/(2(k+1)) - T_{k-1}/(2(k-1)).
  out.col(1) += coeffs_.col(0);
  for (Eigen::Index k = 1; k < n; ++k) {
    out.col(k + 1) += coeffs_.col(k) / (2.0 * (k + 1));
    if (k >= 2) {
      out.col(k - 1) -= coeffs_.col(k) / (2.0 * (k - 1));
    }
  }
  out *= 0.5 * (right_ - left_);
  Vector atLeft = Vector::Zero(coeffs_.rows());
  for (Eigen::Index k = 1; k <= n; ++k) {
    atLeft += (k % 2 == 0 ? 1.0 : -1.0) * out.col(k);
  }
  out.col(0) = valueAtLeft - atLeft;
  return ChebPiece(left_, right_, std::move(out));
}

// ---------------------------------------------------------------------------
// PiecewiseFunction

PiecewiseFunction::PiecewiseFunction(std::vector<ChebPiece> pieces,
                                     Vector endpointValue)
    : pieces_(std::move(pieces)), endpointValue_(std::move(endpointValue)) {
  if (pieces_.empty()) {
    throw DimensionError("PiecewiseFunction: no pieces");
  }
  const int n = pieces_.front().dim();
  if (endpointValue_.size() != n) {
    throw DimensionError("PiecewiseFunction: endpoint value has " +
                         std::to_string(endpointValue_.size()) +
                         " components, pieces have " + std::to_string(n));
  }
  const double scale =
      scaleOf(pieces_.front().left(), pieces_.back().right());
  breakpoints_.reserve(pieces_.size() + 1);
  breakpoints_.push_back(pieces_.front().left());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].dim() != n) {
      throw DimensionError("PiecewiseFunction: pieces disagree on dimension");
    }
    if (i > 0) {
      if (!near(pieces_[i].left(), breakpoints_.back(), scale)) {
        throw DomainError("PiecewiseFunction: pieces are not contiguous");
      }
      pieces_[i] = pieces_[i].relabeled(breakpoints_.back(), pieces_[i].right());
    }
    breakpoints_.push_back(pieces_[i].right());
  }
}

PiecewiseFunction PiecewiseFunction::constant(double a, double b,
                                              const Vector& value) {
  return PiecewiseFunction({ChebPiece::constant(a, b, value)}, value);
}

PiecewiseFunction PiecewiseFunction::zero(double a, double b, int dim) {
  return constant(a, b, Vector::Zero(dim));
}

PiecewiseFunction PiecewiseFunction::piecewiseConstant(
    std::vector<double> breakpoints, const std::vector<Vector>& values,
    Vector endpointValue) {
  if (breakpoints.size() != values.size() + 1) {
    throw DimensionError(
        "piecewiseConstant: need one value per breakpoint interval");
  }
  std::vector<ChebPiece> pieces;
  pieces.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    pieces.push_back(
        ChebPiece::constant(breakpoints[i], breakpoints[i + 1], values[i]));
  }
  return PiecewiseFunction(std::move(pieces), std::move(endpointValue));
}

PiecewiseFunction PiecewiseFunction::fromMonomials(
    std::vector<double> breakpoints,
    const std::vector<std::vector<std::vector<double>>>& coefficients,
    Vector endpointValue) {
  if (breakpoints.size() != coefficients.size() + 1) {
    throw DimensionError(
        "fromMonomials: need one coefficient set per breakpoint interval");
  }
  std::vector<ChebPiece> pieces;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const auto& components = coefficients[i];
    const int dim = static_cast<int>(components.size());
    if (dim == 0) {
      throw DimensionError("fromMonomials: piece without components");
    }
    std::size_t degree = 0;
    for (const auto& c : components) {
      if (c.empty()) {
        throw DimensionError("fromMonomials: empty coefficient list");
      }
      degree = std::max(degree, c.size() - 1);
    }
    auto monomial = [&](double t) {
      Vector v(dim);
      for (int d = 0; d < dim; ++d) {
        double acc = 0.0;
        for (auto it = components[d].rbegin(); it != components[d].rend(); ++it) {
          acc = acc * t + *it;
        }
        v[d] = acc;
      }
      return v;
    };
    if (degree == 0) {
      pieces.push_back(ChebPiece::constant(breakpoints[i], breakpoints[i + 1],
                                           monomial(0.0)));
    } else {
      pieces.push_back(ChebPiece::interpolate(
          breakpoints[i], breakpoints[i + 1], dim,
          static_cast<int>(degree) + 1, monomial));
    }
  }
  return PiecewiseFunction(std::move(pieces), std::move(endpointValue));
}

int PiecewiseFunction::maxDegree() const {
  int d = 0;
  for (const auto& p : pieces_) {
    d = std::max(d, p.degree());
  }
  return d;
}

std::size_t PiecewiseFunction::pieceIndex(double t) const {
  const double scale = scaleOf(lower(), upper());
  if (t < lower() - kBreakpointTolerance * scale ||
      t > upper() + kBreakpointTolerance * scale) {
    throw DomainError("evaluate: t = " + std::to_string(t) +
                      " outside [" + std::to_string(lower()) + ", " +
                      std::to_string(upper()) + "]");
  }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto raw = static_cast<std::ptrdiff_t>(it - breakpoints_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
      raw, 0, static_cast<std::ptrdiff_t>(pieces_.size()) - 1));
}

Vector PiecewiseFunction::evaluate(double t) const {
  const std::size_t i = pieceIndex(t);
  const double scale = scaleOf(lower(), upper());
  if (near(t, upper(), scale)) {
    return endpointValue_;
  }
  for (const auto& [point, value] : pointValues_) {
    if (near(t, point, scale)) {
      return value;
    }
  }
  return pieces_[i](t);
}

PiecewiseFunction PiecewiseFunction::withEndpointValue(Vector value) const {
  if (value.size() != dim()) {
    throw DimensionError("withEndpointValue: dimension mismatch");
  }
  PiecewiseFunction out = *this;
  out.endpointValue_ = std::move(value);
  return out;
}

PiecewiseFunction PiecewiseFunction::withPointValue(double t,
                                                    Vector value) const {
  if (value.size() != dim()) {
    throw DimensionError("withPointValue: dimension mismatch");
  }
  pieceIndex(t);  // domain check
  const double scale = scaleOf(lower(), upper());
  if (near(t, upper(), scale)) {
    return withEndpointValue(std::move(value));
  }
  PiecewiseFunction out = *this;
  auto& pv = out.pointValues_;
  const auto existing = std::find_if(pv.begin(), pv.end(), [&](const auto& e) {
    return near(e.first, t, scale);
  });
  if (existing != pv.end()) {
    existing->second = std::move(value);
  } else {
    pv.emplace_back(t, std::move(value));
    std::sort(pv.begin(), pv.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  return out;
}

PiecewiseFunction PiecewiseFunction::withoutPointValues() const {
  PiecewiseFunction out = *this;
  out.pointValues_.clear();
  return out;
}

double PiecewiseFunction::continuityDefect(double from) const {
  const double scale = scaleOf(lower(), upper());
  double worst = (pieces_.back()(upper()) - endpointValue_).norm();
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double t = breakpoints_[i];
    if (t < from - kBreakpointTolerance * scale) {
      continue;
    }
    worst = std::max(worst, (pieces_[i - 1](t) - pieces_[i](t)).norm());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// LazyComposition

LazyComposition::LazyComposition(PiecewiseFunction base, PointMap map,
                                 int outDim)
    : base_(std::move(base)), map_(std::move(map)), outDim_(outDim) {
  if (!map_) {
    throw ParameterError("LazyComposition: empty map");
  }
  if (outDim_ < 1) {
    throw DimensionError("LazyComposition: output dimension must be >= 1");
  }
}

LazyComposition LazyComposition::shifted(double r) const {
  return LazyComposition(shift(base_, r), map_, outDim_);
}

// ---------------------------------------------------------------------------
// Algebra

std::vector<double> mergeBreakpoints(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  std::vector<double> all;
  all.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(all));
  if (all.empty()) {
    return all;
  }
  const double scale = scaleOf(all.front(), all.back());
  std::vector<double> out;
  out.reserve(all.size());
  for (double t : all) {
    if (out.empty() || !near(t, out.back(), scale)) {
      out.push_back(t);
    }
  }
  return out;
}

PiecewiseFunction refine(const PiecewiseFunction& f,
                         const std::vector<double>& breakpoints) {
  std::vector<ChebPiece> pieces;
  pieces.reserve(breakpoints.size());
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
    const double lo = breakpoints[j];
    const double hi = breakpoints[j + 1];
    const std::size_t i = f.pieceIndex(0.5 * (lo + hi));
    pieces.push_back(f.piece(i).restricted(lo, hi));
  }
  PiecewiseFunction out(std::move(pieces), f.endpointValue());
  for (const auto& [t, v] : f.pointValues()) {
    out = out.withPointValue(t, v);
  }
  return out;
}

namespace {

void requireSameDomain(const PiecewiseFunction& f, const PiecewiseFunction& g,
                       const char* op) {
  const double scale = scaleOf(f.lower(), f.upper());
  if (!near(f.lower(), g.lower(), scale) || !near(f.upper(), g.upper(), scale)) {
    throw DimensionError(std::string(op) + ": domains differ");
  }
  if (f.dim() != g.dim()) {
    throw DimensionError(std::string(op) + ": dimensions differ (" +
                         std::to_string(f.dim()) + " vs " +
                         std::to_string(g.dim()) + ")");
  }
}

std::vector<double> pointUnion(const PiecewiseFunction& f,
                               const PiecewiseFunction& g) {
  std::vector<double> pts;
  for (const auto& e : f.pointValues()) pts.push_back(e.first);
  for (const auto& e : g.pointValues()) pts.push_back(e.first);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

PiecewiseFunction shift(const PiecewiseFunction& f, double r) {
  std::vector<ChebPiece> pieces;
  pieces.reserve(f.pieceCount());
  for (const auto& p : f.pieces()) {
    pieces.push_back(p.shifted(r));
  }
  PiecewiseFunction out(std::move(pieces), f.endpointValue());
  for (const auto& [t, v] : f.pointValues()) {
    out = out.withPointValue(t + r, v);
  }
  return out;
}

PiecewiseFunction combine(double a, const PiecewiseFunction& f, double b,
                          const PiecewiseFunction& g) {
  requireSameDomain(f, g, "combine");
  const auto bps = mergeBreakpoints(f.breakpoints(), g.breakpoints());
  const PiecewiseFunction F = refine(f.withoutPointValues(), bps);
  const PiecewiseFunction G = refine(g.withoutPointValues(), bps);
  std::vector<ChebPiece> pieces;
  pieces.reserve(F.pieceCount());
  for (std::size_t i = 0; i < F.pieceCount(); ++i) {
    const auto cols = std::max(F.piece(i).coefficients().cols(),
                               G.piece(i).coefficients().cols());
    pieces.emplace_back(
        F.piece(i).left(), F.piece(i).right(),
        a * padColumns(F.piece(i).coefficients(), cols) +
            b * padColumns(G.piece(i).coefficients(), cols));
  }
  PiecewiseFunction out(std::move(pieces),
                        a * f.endpointValue() + b * g.endpointValue());
  for (double t : pointUnion(f, g)) {
    out = out.withPointValue(t, a * f.evaluate(t) + b * g.evaluate(t));
  }
  return out;
}

PiecewiseFunction add(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  return combine(1.0, f, 1.0, g);
}

PiecewiseFunction subtract(const PiecewiseFunction& f,
                           const PiecewiseFunction& g) {
  return combine(1.0, f, -1.0, g);
}

PiecewiseFunction scale(const PiecewiseFunction& f, double factor) {
  std::vector<ChebPiece> pieces;
  pieces.reserve(f.pieceCount());
  for (const auto& p : f.pieces()) {
    pieces.push_back(p.scaled(factor));
  }
  PiecewiseFunction out(std::move(pieces), factor * f.endpointValue());
  for (const auto& [t, v] : f.pointValues()) {
    out = out.withPointValue(t, factor * v);
  }
  return out;
}

PiecewiseFunction restrict(const PiecewiseFunction& f, double lo, double hi) {
  const double scale = scaleOf(f.lower(), f.upper());
  const double tol = kBreakpointTolerance * scale;
  if (lo < f.lower() - tol || hi > f.upper() + tol || !(hi > lo + tol)) {
    throw DomainError("restrict: [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] is not a sub-interval of [" +
                      std::to_string(f.lower()) + ", " +
                      std::to_string(f.upper()) + "]");
  }
  // Snap onto existing breakpoints to avoid slivers.
  for (double t : f.breakpoints()) {
    if (near(lo, t, scale)) lo = t;
    if (near(hi, t, scale)) hi = t;
  }
  std::vector<ChebPiece> pieces;
  for (const auto& p : f.pieces()) {
    const double left = std::max(p.left(), lo);
    const double right = std::min(p.right(), hi);
    if (right - left > tol) {
      pieces.push_back(p.restricted(left, right));
    }
  }
  Vector endpoint;
  const bool keepsEnd = near(hi, f.upper(), scale);
  if (keepsEnd) {
    endpoint = f.endpointValue();
  } else {
    endpoint = pieces.back()(hi);
    for (const auto& [t, v] : f.pointValues()) {
      if (near(t, hi, scale)) endpoint = v;
    }
  }
  PiecewiseFunction out(std::move(pieces), std::move(endpoint));
  for (const auto& [t, v] : f.pointValues()) {
    if (t >= lo - tol && t < hi - tol) {
      out = out.withPointValue(std::max(t, lo), v);
    }
  }
  return out;
}

PiecewiseFunction join(const PiecewiseFunction& left,
                       const PiecewiseFunction& right) {
  const double scale = scaleOf(left.lower(), right.upper());
  if (!near(left.upper(), right.lower(), scale)) {
    throw DomainError("join: intervals do not meet");
  }
  if (left.dim() != right.dim()) {
    throw DimensionError("join: dimensions differ");
  }
  std::vector<ChebPiece> pieces = left.pieces();
  for (const auto& p : right.pieces()) {
    pieces.push_back(p);
  }
  PiecewiseFunction out(std::move(pieces), right.endpointValue());
  for (const auto& [t, v] : left.pointValues()) out = out.withPointValue(t, v);
  for (const auto& [t, v] : right.pointValues()) out = out.withPointValue(t, v);
  return out;
}

PiecewiseFunction stack(const PiecewiseFunction& f,
                        const PiecewiseFunction& g) {
  const double scale = scaleOf(f.lower(), f.upper());
  if (!near(f.lower(), g.lower(), scale) || !near(f.upper(), g.upper(), scale)) {
    throw DimensionError("stack: domains differ");
  }
  const auto bps = mergeBreakpoints(f.breakpoints(), g.breakpoints());
  const PiecewiseFunction F = refine(f.withoutPointValues(), bps);
  const PiecewiseFunction G = refine(g.withoutPointValues(), bps);
  std::vector<ChebPiece> pieces;
  pieces.reserve(F.pieceCount());
  for (std::size_t i = 0; i < F.pieceCount(); ++i) {
    const auto cols = std::max(F.piece(i).coefficients().cols(),
                               G.piece(i).coefficients().cols());
    Matrix coeffs(f.dim() + g.dim(), cols);
    coeffs.topRows(f.dim()) = padColumns(F.piece(i).coefficients(), cols);
    coeffs.bottomRows(g.dim()) = padColumns(G.piece(i).coefficients(), cols);
    pieces.emplace_back(F.piece(i).left(), F.piece(i).right(), std::move(coeffs));
  }
  Vector endpoint(f.dim() + g.dim());
  endpoint << f.endpointValue(), g.endpointValue();
  PiecewiseFunction out(std::move(pieces), std::move(endpoint));
  for (double t : pointUnion(f, g)) {
    Vector v(f.dim() + g.dim());
    v << f.evaluate(t), g.evaluate(t);
    out = out.withPointValue(t, std::move(v));
  }
  return out;
}

PiecewiseFunction snapDomain(const PiecewiseFunction& f, double a, double b) {
  const double scale = scaleOf(a, b);
  if (!near(f.lower(), a, scale) || !near(f.upper(), b, scale)) {
    throw DomainError("snapDomain: domain [" + std::to_string(f.lower()) +
                      ", " + std::to_string(f.upper()) + "] is not near [" +
                      std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  std::vector<ChebPiece> pieces = f.pieces();
  pieces.front() = pieces.front().relabeled(a, pieces.front().right());
  pieces.back() = pieces.back().relabeled(pieces.back().left(), b);
  PiecewiseFunction out(std::move(pieces), f.endpointValue());
  for (const auto& [t, v] : f.pointValues()) {
    out = out.withPointValue(std::clamp(t, a, b), v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation and integration

namespace detail {

void requireExponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ParameterError("L^p norm: exponent p = " + std::to_string(p) +
                         " must satisfy 1 <= p < inf");
  }
}

std::vector<double> lobattoSamples(double left, double right, int n) {
  std::vector<double> u = chebyshevLobatto(n);
  const double half = 0.5 * (right - left);
  const double mid = 0.5 * (right + left);
  for (double& x : u) {
    x = mid + half * x;
  }
  // Pin the ends exactly; cos(0) and cos(pi) are exact but the affine map
  // is not.
  u.front() = right;
  u.back() = left;
  return u;
}

}  // namespace detail

MaterializeResult materialize(const LazyComposition& g, int degree,
                              const QuadratureConfig& cfg) {
  if (degree < 0) {
    throw ParameterError("materialize: degree must be >= 0");
  }
  const auto& bps = g.breakpoints();
  std::vector<ChebPiece> pieces;
  pieces.reserve(g.pieceCount());
  double defect = 0.0;
  for (std::size_t i = 0; i < g.pieceCount(); ++i) {
    auto at = [&](double t) { return g.evaluatePiece(i, t); };
    ChebPiece piece =
        degree == 0
            ? ChebPiece::constant(bps[i], bps[i + 1], at(0.5 * (bps[i] + bps[i + 1])))
            : ChebPiece::interpolate(bps[i], bps[i + 1], g.dim(), degree + 1, at);
    for (double t :
         detail::lobattoSamples(bps[i], bps[i + 1], cfg.supSamplesPerPiece)) {
      defect = std::max(defect, (piece(t) - at(t)).norm());
    }
    pieces.push_back(std::move(piece));
  }
  PiecewiseFunction out(std::move(pieces), g.evaluate(g.upper()));
  for (const auto& [t, v] : g.base().pointValues()) {
    out = out.withPointValue(t, g.map()(v));
  }
  return {std::move(out), defect};
}

CumulativeIntegral cumulativeIntegral(const LazyComposition& g,
                                      const Vector& initial,
                                      const QuadratureConfig& cfg) {
  cfg.validate();
  if (initial.size() != g.dim()) {
    throw DimensionError("cumulativeIntegral: initial value dimension");
  }
  const int nodes = cfg.nodesPerPiece;
  const auto& bps = g.breakpoints();
  std::vector<ChebPiece> pieces;
  Vector value = initial;
  double worst = 0.0;

  std::function<void(std::size_t, double, double, int)> integrate =
      [&](std::size_t i, double lo, double hi, int depth) {
        auto at = [&](double t) { return g.evaluatePiece(i, t); };
        ChebPiece interp = ChebPiece::interpolate(lo, hi, g.dim(), nodes, at);
        double defect = 0.0;
        double magnitude = 0.0;
        for (double t : detail::lobattoSamples(lo, hi, nodes)) {
          const Vector exact = at(t);
          magnitude = std::max(magnitude, exact.norm());
          defect = std::max(defect, (interp(t) - exact).norm());
        }
        defect /= 1.0 + magnitude;
        if (defect > cfg.tolerance && depth < cfg.maxBisections) {
          const double mid = 0.5 * (lo + hi);
          integrate(i, lo, mid, depth + 1);
          integrate(i, mid, hi, depth + 1);
          return;
        }
        worst = std::max(worst, defect);
        ChebPiece anti = interp.antiderivative(value);
        value = anti(hi);
        pieces.push_back(std::move(anti));
      };

  for (std::size_t i = 0; i < g.pieceCount(); ++i) {
    integrate(i, bps[i], bps[i + 1], 0);
  }
  return {PiecewiseFunction(std::move(pieces), value), worst};
}

// ---------------------------------------------------------------------------
// Random generation

PiecewiseFunction randomPiecewiseConstant(double a, double b, int dim,
                                          int pieces, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> bps(pieces + 1);
  std::vector<Vector> values;
  for (int i = 0; i <= pieces; ++i) {
    bps[i] = a + (b - a) * i / pieces;
  }
  bps.back() = b;
  for (int i = 0; i < pieces; ++i) {
    Vector v(dim);
    for (int d = 0; d < dim; ++d) v[d] = normal(rng);
    values.push_back(std::move(v));
  }
  Vector endpoint(dim);
  for (int d = 0; d < dim; ++d) endpoint[d] = normal(rng);
  return PiecewiseFunction::piecewiseConstant(std::move(bps), values,
                                              std::move(endpoint));
}

PiecewiseFunction randomPiecewisePolynomial(double a, double b, int dim,
                                            int maxPieces, int maxDegree,
                                            double amplitude,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pieceCount(1, std::max(1, maxPieces));
  std::uniform_int_distribution<int> degreeDist(0, std::max(0, maxDegree));
  const int n = pieceCount(rng);
  // Jittered uniform breakpoints keep every piece longer than (b - a)/(4n).
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<double> bps(n + 1);
  bps.front() = a;
  bps.back() = b;
  for (int i = 1; i < n; ++i) {
    bps[i] = a + (b - a) * (i + jitter(rng)) / n;
  }
  std::vector<ChebPiece> pieces;
  for (int i = 0; i < n; ++i) {
    const int degree = degreeDist(rng);
    Matrix coeffs(dim, degree + 1);
    for (int k = 0; k <= degree; ++k) {
      for (int d = 0; d < dim; ++d) {
        coeffs(d, k) = amplitude * normal(rng) / (k + 1);
      }
    }
    pieces.emplace_back(bps[i], bps[i + 1], std::move(coeffs));
  }
  Vector endpoint(dim);
  for (int d = 0; d < dim; ++d) endpoint[d] = amplitude * normal(rng);
  return PiecewiseFunction(std::move(pieces), std::move(endpoint));
}

}  // namespace lpdde
