#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

double RiemannSolution::at(double t) const {
  const double s = t / h;
  const auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= x.size()) {
    return x.back();
  }
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * x[i] + w * x[i + 1];
}

RiemannSolution riemannSolve(const std::function<double(double)>& f,
                             const std::function<double(double)>& phi, double r,
                             int steps, int panels) {
  RiemannSolution sol;
  sol.h = r / panels;
  const std::size_t n = static_cast<std::size_t>(steps) * panels;
  sol.x.resize(n + 1);
  sol.x[0] = phi(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double delayed;
    if (i < static_cast<std::size_t>(panels)) {
      delayed = phi((static_cast<double>(i) + 0.5) * sol.h - r);
    } else {
      const std::size_t j = i - panels;
      delayed = 0.5 * (sol.x[j] + sol.x[j + 1]);
    }
    sol.x[i + 1] = sol.x[i] + sol.h * f(delayed);
  }
  return sol;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

long double evaluate(const Poly& p, double t) {
  long double v = 0.0L;
  for (std::size_t k = p.size(); k-- > 0;) {
    v = v * t + p[k];
  }
  return v;
}

long double integrate(const Poly& p, double a, double b) {
  Poly anti(p.size() + 1, 0.0L);
  for (std::size_t k = 0; k < p.size(); ++k) {
    anti[k + 1] = p[k] / static_cast<long double>(k + 1);
  }
  return evaluate(anti, b) - evaluate(anti, a);
}

long double evenPowerIntegral(const std::vector<Poly>& v, int p, double a, double b) {
  Poly square{0.0L};
  for (const Poly& c : v) {
    square = add(square, multiply(c, c));
  }
  if (p == 2) {
    return integrate(square, a, b);
  }
  if (p == 4) {
    return integrate(multiply(square, square), a, b);
  }
  throw std::invalid_argument("evenPowerIntegral: p must be 2 or 4");
}

}  // namespace oracle
