#include "lpdde/nonlinear.hpp"

#include <limits>

namespace lpdde {

double GrowthBound::at(double radius) const {
  return c1 * std::pow(radius, alpha) + c2;
}

double matrixNorm(const Matrix& a, MatrixNorm kind) {
  if (kind == MatrixNorm::Frobenius || a.rows() == 1 || a.cols() == 1) {
    return a.norm();
  }
  if (std::min(a.rows(), a.cols()) <= 2) {
    const Matrix g = a.cols() <= 2 ? Matrix(a.transpose() * a)
                                   : Matrix(a * a.transpose());
    const double p = g(0, 0);
    const double q = g(1, 1);
    const double off = g(0, 1);
    const double lambda =
        0.5 * (p + q + std::sqrt((p - q) * (p - q) + 4.0 * off * off));
    return std::sqrt(std::max(0.0, lambda));
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  v.normalize();
  const Matrix g = a.transpose() * a;
  for (int iter = 0; iter < 50; ++iter) {
    Vector w = g * v;
    const double n = w.norm();
    if (n == 0.0) {
      return 0.0;
    }
    v = w / n;
  }
  return std::sqrt(std::max(0.0, v.dot(g * v)));
}

double Nonlinearity::jacobianNorm(const Vector& x) const {
  return matrixNorm(jacobian(x), norm);
}

double lipschitzOnBall(const Nonlinearity& nl, double M) {
  if (!nl.dfGrowth) {
    throw ContractError("lipschitzOnBall: '" + nl.name +
                        "' has no Jacobian growth certificate");
  }
  if (!(M > 0.0)) {
    throw ParameterError("lipschitzOnBall: radius must be positive");
  }
  return nl.dfGrowth->at(M);
}

GrowthReport growthVerify(const Nonlinearity& nl, double radius, int samples,
                          std::uint64_t seed) {
  if (samples < 1) {
    throw ParameterError("growthVerify: samples must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  GrowthReport report;
  report.samples = samples;
  report.fDefect = -std::numeric_limits<double>::infinity();
  report.dfDefect = nl.dfGrowth ? -std::numeric_limits<double>::infinity() : 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector x(nl.dimIn);
    for (int d = 0; d < nl.dimIn; ++d) x[d] = normal(rng);
    const double n = x.norm();
    const double rho = radius * std::pow(uniform(rng), 1.0 / nl.dimIn);
    if (n > 0.0) x *= rho / n;
    const double r = x.norm();
    const double fb = nl.fGrowth.at(r);
    report.fDefect = std::max(report.fDefect, (nl(x).norm() - fb) / (1.0 + fb));
    if (nl.dfGrowth) {
      const double db = nl.dfGrowth->at(r);
      report.dfDefect =
          std::max(report.dfDefect, (nl.jacobianNorm(x) - db) / (1.0 + db));
    }
  }
  report.maxDefect = std::max(report.fDefect, report.dfDefect);
  report.passed =
      report.maxDefect <= 64.0 * std::numeric_limits<double>::epsilon();
  return report;
}

double holderConjugate(double s) {
  if (!(s > 1.0)) {
    throw ParameterError("holderConjugate: exponent must exceed 1");
  }
  return s / (s - 1.0);
}

// ---------------------------------------------------------------------------
// Registry. Growth constants are derived by hand next to each entry.

Nonlinearity makeLinear(const Matrix& a) {
  // Rectangular A is allowed (composition operators map R^M -> R^N).
  const double n = matrixNorm(a);
  Nonlinearity nl;
  nl.name = "linear";
  nl.dimIn = static_cast<int>(a.cols());
  nl.dimOut = static_cast<int>(a.rows());
  nl.eval = [a](const Vector& x) -> Vector { return a * x; };
  nl.jacobian = [a](const Vector&) -> Matrix { return a; };
  // |Ax| <= ||A|| |x|; ||Df|| = ||A||.
  nl.fGrowth = {1.0, n, 0.0};
  nl.dfGrowth = GrowthBound{1.0, 0.0, n};
  nl.lipschitz = n;
  nl.jacobianLipschitz = 0.0;
  return nl;
}

Nonlinearity makeScalarLinear(int dim, double c) {
  return makeLinear(c * Matrix::Identity(dim, dim));
}

Nonlinearity makeCubic(int dim) {
  Nonlinearity nl;
  nl.name = "cubic";
  nl.dimIn = nl.dimOut = dim;
  nl.eval = [](const Vector& x) -> Vector { return x.array().cube(); };
  nl.jacobian = [](const Vector& x) -> Matrix {
    return (3.0 * x.array().square()).matrix().asDiagonal();
  };
  // sqrt(sum x_i^6) <= (sum x_i^2)^{3/2}; ||diag(3x_i^2)|| = 3 max x_i^2 <= 3|x|^2.
  nl.fGrowth = {3.0, 1.0, 0.0};
  nl.dfGrowth = GrowthBound{2.0, 3.0, 0.0};
  return nl;
}

Nonlinearity makeQuadratic(int dim, double c) {
  Nonlinearity nl;
  nl.name = c == 1.0 ? "square" : (c == 0.5 ? "half-square" : "quadratic");
  nl.dimIn = nl.dimOut = dim;
  nl.eval = [c](const Vector& x) -> Vector { return c * x.array().square(); };
  nl.jacobian = [c](const Vector& x) -> Matrix {
    return (2.0 * c * x.array()).matrix().asDiagonal();
  };
  // |c| sqrt(sum x_i^4) <= |c||x|^2; ||diag(2c x_i)|| = 2|c| max|x_i| <= 2|c||x|,
  // and the same bound on differences gives lip(Df) = 2|c|.
  const double a = std::abs(c);
  nl.fGrowth = {2.0, a, 0.0};
  nl.dfGrowth = GrowthBound{1.0, 2.0 * a, 0.0};
  nl.jacobianLipschitz = 2.0 * a;
  return nl;
}

Nonlinearity makeSaturating(int dim) {
  Nonlinearity nl;
  nl.name = "saturating";
  nl.dimIn = nl.dimOut = dim;
  nl.eval = [](const Vector& x) -> Vector {
    return x / std::sqrt(1.0 + x.squaredNorm());
  };
  nl.jacobian = [dim](const Vector& x) -> Matrix {
    const double s = 1.0 + x.squaredNorm();
    return Matrix::Identity(dim, dim) / std::sqrt(s) -
           x * x.transpose() / (s * std::sqrt(s));
  };
  // |f| = |x| / sqrt(1 + |x|^2) <= |x|. Df has eigenvalues (1+|x|^2)^{-3/2}
  // (along x) and (1+|x|^2)^{-1/2}, so ||Df|| <= 1 and lip(f) = 1.
  // Differentiating Df = a(s) I - b(s) x x^T with s = |x|^2 gives
  // ||D^2 f(x)|| <= 3|x|(1+|x|^2)^{-3/2} + 3|x|^3(1+|x|^2)^{-5/2}
  //              <= 1.1548 + 0.5578 < 1.75.
  nl.fGrowth = {1.0, 1.0, 0.0};
  nl.dfGrowth = GrowthBound{1.0, 0.0, 1.0};
  nl.lipschitz = 1.0;
  nl.jacobianLipschitz = 1.75;
  return nl;
}

Nonlinearity makeMackeyGlass(double beta, int k) {
  if (k < 1) {
    throw ParameterError("mackey-glass: k must be >= 1");
  }
  Nonlinearity nl;
  nl.name = "mackey-glass";
  nl.dimIn = nl.dimOut = 1;
  const int power = 2 * k;
  nl.eval = [beta, power](const Vector& x) -> Vector {
    const double y = x[0];
    return Vector::Constant(1, beta * y / (1.0 + std::pow(y, power)));
  };
  nl.jacobian = [beta, power](const Vector& x) -> Matrix {
    const double z = std::pow(x[0], power);
    return Matrix::Constant(1, 1,
                            beta * (1.0 - (power - 1.0) * z) / ((1.0 + z) * (1.0 + z)));
  };
  // |f| <= |beta||y|. With z = y^{2k}: f' = beta (1 - (2k-1) z)/(1+z)^2, and
  // (2k-1) z / (1+z)^2 <= (2k-1)/4, so |f'| <= |beta| max(1, (2k-1)/4).
  const double b = std::abs(beta);
  const double slope = b * std::max(1.0, (power - 1.0) / 4.0);
  nl.fGrowth = {1.0, b, 0.0};
  nl.dfGrowth = GrowthBound{1.0, 0.0, slope};
  nl.lipschitz = slope;
  if (k == 1) {
    // f'' = 2 beta y (y^2 - 3) / (1 + y^2)^3 peaks in modulus at y = sqrt(2) - 1
    // with value 1.45711 |beta|.
    nl.jacobianLipschitz = 1.4572 * b;
  }
  return nl;
}

Nonlinearity makeConstant(const Vector& c) {
  Nonlinearity nl;
  nl.name = "constant";
  const int dim = static_cast<int>(c.size());
  nl.dimIn = nl.dimOut = dim;
  nl.eval = [c](const Vector&) -> Vector { return c; };
  nl.jacobian = [dim](const Vector&) -> Matrix { return Matrix::Zero(dim, dim); };
  nl.fGrowth = {1.0, 0.0, c.norm()};
  nl.dfGrowth = GrowthBound{1.0, 0.0, 0.0};
  nl.lipschitz = 0.0;
  nl.jacobianLipschitz = 0.0;
  return nl;
}

Nonlinearity makeZero(int dim) {
  Nonlinearity nl = makeConstant(Vector::Zero(dim));
  nl.name = "zero";
  return nl;
}

namespace {

double scalar(const NonlinearityParams& p, const std::string& key,
              double fallback) {
  const auto it = p.scalars.find(key);
  return it == p.scalars.end() ? fallback : it->second;
}

int dimension(const NonlinearityParams& p) {
  const double d = scalar(p, "dim", 1.0);
  if (d < 1.0 || d != std::floor(d)) {
    throw ParameterError("nonlinearity parameter 'dim' must be a positive integer");
  }
  return static_cast<int>(d);
}

}  // namespace

Nonlinearity makeNonlinearity(const std::string& name,
                              const NonlinearityParams& params) {
  if (name == "linear") {
    if (!params.matrix.empty()) {
      const auto rows = static_cast<Eigen::Index>(params.matrix.size());
      const auto cols = static_cast<Eigen::Index>(params.matrix.front().size());
      Matrix a(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(params.matrix[i].size()) != cols) {
          throw ParameterError("linear: ragged matrix");
        }
        for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = params.matrix[i][j];
      }
      return makeLinear(a);
    }
    return makeScalarLinear(dimension(params), scalar(params, "scale", 1.0));
  }
  if (name == "cubic") return makeCubic(dimension(params));
  if (name == "saturating") return makeSaturating(dimension(params));
  if (name == "square") return makeQuadratic(dimension(params), 1.0);
  if (name == "half-square") return makeQuadratic(dimension(params), 0.5);
  if (name == "quadratic") {
    return makeQuadratic(dimension(params), scalar(params, "coefficient", 1.0));
  }
  if (name == "mackey-glass") {
    const double k = scalar(params, "k", 1.0);
    if (k != std::floor(k)) {
      throw ParameterError("mackey-glass: k must be an integer");
    }
    return makeMackeyGlass(scalar(params, "beta", 2.0), static_cast<int>(k));
  }
  if (name == "zero") return makeZero(dimension(params));
  if (name == "constant") {
    const auto it = params.vectors.find("value");
    if (it == params.vectors.end() || it->second.empty()) {
      throw ParameterError("constant: missing 'value'");
    }
    return makeConstant(Eigen::Map<const Vector>(
        it->second.data(), static_cast<Eigen::Index>(it->second.size())));
  }
  throw ParameterError("unknown nonlinearity '" + name + "'");
}

std::vector<std::string> registeredNonlinearities() {
  return {"linear", "cubic", "saturating", "square", "half-square",
          "quadratic", "mackey-glass", "zero", "constant"};
}

}  // namespace lpdde
