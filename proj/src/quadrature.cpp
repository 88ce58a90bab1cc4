#include "lpdde/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "lpdde/errors.hpp"

namespace lpdde {

void QuadratureConfig::validate() const {
  if (nodesPerPiece < 2) {
    throw ParameterError("QuadratureConfig: nodesPerPiece must be >= 2");
  }
  if (supSamplesPerPiece < 8) {
    throw ParameterError("QuadratureConfig: supSamplesPerPiece must be >= 8");
  }
  if (!(tolerance >= 0.0)) {
    throw ParameterError("QuadratureConfig: tolerance must be >= 0");
  }
  if (maxBisections < 0) {
    throw ParameterError("QuadratureConfig: maxBisections must be >= 0");
  }
}

namespace {

GaussRule computeRule(int n) {
  // Newton in extended precision so the rounded nodes and weights are
  // accurate to the last bit.
  using Real = long double;
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real z = std::cos(std::numbers::pi_v<Real> * (i + 0.75L) / (n + 0.5L));
    Real derivative = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      Real p1 = 1.0L;
      Real p2 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const Real p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j - 1.0L) * z * p2 - (j - 1.0L) * p3) / j;
      }
      derivative = n * (z * p1 - p2) / (z * z - 1.0L);
      const Real previous = z;
      z = previous - p1 / derivative;
      if (std::abs(z - previous) <= 4 * std::numeric_limits<Real>::epsilon()) {
        break;
      }
    }
    const Real w = 2.0L / ((1.0L - z * z) * derivative * derivative);
    rule.nodes[i] = static_cast<double>(-z);
    rule.nodes[n - 1 - i] = static_cast<double>(z);
    rule.weights[i] = static_cast<double>(w);
    rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

}  // namespace

const GaussRule& gaussLegendre(int n) {
  if (n < 1) {
    throw ParameterError("gaussLegendre: n must be >= 1");
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<GaussRule>(computeRule(n));
  }
  return *slot;
}

std::vector<double> chebyshevNodes(int n) {
  std::vector<double> nodes(n);
  for (int j = 0; j < n; ++j) {
    nodes[j] = std::cos(std::numbers::pi * (j + 0.5) / n);
  }
  return nodes;
}

std::vector<double> chebyshevLobatto(int n) {
  std::vector<double> nodes(n + 1);
  for (int j = 0; j <= n; ++j) {
    nodes[j] = std::cos(std::numbers::pi * j / n);
  }
  return nodes;
}

}  // namespace lpdde
