#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpdde/funcrep.hpp"

namespace lpdde {

/// Certified polynomial growth |g(x)| <= c1 |x|^alpha + c2 for all x.
struct GrowthBound {
  double alpha = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double at(double radius) const;
};

/// How ||Df(x)|| is measured.
enum class MatrixNorm { Spectral, Frobenius };

/// Spectral norm via closed-form singular values when min(rows, cols) <= 2,
/// otherwise 50 power iterations on A^T A from a fixed start vector.
double matrixNorm(const Matrix& a, MatrixNorm kind = MatrixNorm::Spectral);

using JacobianMap = std::function<Matrix(const Vector&)>;

/// A pointwise nonlinearity f: R^dimIn -> R^dimOut with its Jacobian and
/// hand-derived growth certificates.
struct Nonlinearity {
  std::string name;
  int dimIn = 1;
  int dimOut = 1;
  PointMap eval;
  JacobianMap jacobian;
  GrowthBound fGrowth;
  std::optional<GrowthBound> dfGrowth;
  /// Global Lipschitz constant of f, when f is globally Lipschitz.
  std::optional<double> lipschitz;
  /// Global Lipschitz constant of Df (spectral norm), when known.
  std::optional<double> jacobianLipschitz;
  MatrixNorm norm = MatrixNorm::Spectral;

  Vector operator()(const Vector& x) const { return eval(x); }
  /// x -> ||Df(x)||.
  double jacobianNorm(const Vector& x) const;
};

/// L(M) = c1 M^alpha + c2 from the Jacobian certificate: a Lipschitz constant
/// of f on the closed ball of radius M.
double lipschitzOnBall(const Nonlinearity& nl, double M);

struct GrowthReport {
  /// max over samples of (|f(x)| - c1|x|^a - c2) / (1 + c1|x|^a + c2).
  double fDefect = 0.0;
  /// Same for ||Df(x)||; zero when no Jacobian certificate exists.
  double dfDefect = 0.0;
  double maxDefect = 0.0;
  int samples = 0;
  /// maxDefect <= 64 machine epsilons (rounding in the two sides).
  bool passed = false;
};

/// Checks both growth certificates on `samples` points drawn uniformly from
/// the closed ball of the given radius with a seeded generator.
GrowthReport growthVerify(const Nonlinearity& nl, double radius, int samples,
                          std::uint64_t seed);

/// s / (s - 1).
double holderConjugate(double s);

// Registry -------------------------------------------------------------------

/// x -> A x.
Nonlinearity makeLinear(const Matrix& a);
/// x -> c * x (component-wise identity times c).
Nonlinearity makeScalarLinear(int dim, double c);
/// Component-wise x -> x^3.
Nonlinearity makeCubic(int dim);
/// Component-wise x -> c x^2 ("square" for c = 1, "half-square" for 1/2).
Nonlinearity makeQuadratic(int dim, double c);
/// x -> x / sqrt(1 + |x|^2).
Nonlinearity makeSaturating(int dim);
/// Scalar y -> beta y / (1 + y^(2k)), k >= 1.
Nonlinearity makeMackeyGlass(double beta, int k);
/// x -> c (constant), Df = 0.
Nonlinearity makeConstant(const Vector& c);
Nonlinearity makeZero(int dim);

/// Parameters accepted by `makeNonlinearity`, by name:
///   linear:       "matrix" (row-major nested list) or "scale" with "dim"
///   cubic, saturating, square, half-square, zero: "dim"
///   quadratic:    "dim", "coefficient"
///   mackey-glass: "beta", "k"
///   constant:     "value" (list)
struct NonlinearityParams {
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> vectors;
  std::vector<std::vector<double>> matrix;
};

Nonlinearity makeNonlinearity(const std::string& name,
                              const NonlinearityParams& params);

std::vector<std::string> registeredNonlinearities();

}  // namespace lpdde
