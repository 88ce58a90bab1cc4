#pragma once

#include <span>
#include <vector>

namespace lpdde {

/// Resolution knobs shared by every norm, interpolation and integration
/// routine of the library.
struct QuadratureConfig {
  /// Gauss-Legendre nodes per piece; also the number of Chebyshev nodes
  /// used when an integrand is interpolated before antidifferentiation.
  int nodesPerPiece = 16;
  /// Initial Chebyshev-Lobatto sample count per piece for sup norms.
  int supSamplesPerPiece = 64;
  /// Agreement threshold for sup-norm refinement and interpolation defects.
  double tolerance = 1e-10;
  /// Maximum bisection depth when an interpolated integrand misses
  /// `tolerance`.
  int maxBisections = 10;

  void validate() const;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule on [-1, 1]. Rules are computed
/// once per n by Newton iteration on P_n and cached; the returned reference
/// stays valid for the lifetime of the program.
const GaussRule& gaussLegendre(int n);

/// Chebyshev points of the first kind, cos(pi (j + 1/2) / n), j = 0..n-1.
std::vector<double> chebyshevNodes(int n);

/// Chebyshev-Lobatto points cos(pi j / n), j = 0..n (n + 1 points).
std::vector<double> chebyshevLobatto(int n);

}  // namespace lpdde
