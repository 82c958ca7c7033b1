#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace graded {

template <typename Real>
struct QuadratureRule {
  std::vector<Real> nodes;  // ascending
  std::vector<Real> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 2n - 1.
/// Nodes are computed for one half by Newton iteration on P_n and mirrored, so the
/// rule is exactly symmetric.
template <typename Real>
QuadratureRule<Real> gauss_legendre(int n) {
  QuadratureRule<Real> rule;
  rule.nodes.assign(static_cast<std::size_t>(n), Real(0));
  rule.weights.assign(static_cast<std::size_t>(n), Real(0));
  const Real pi = std::numbers::pi_v<Real>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real derivative = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1);
      const Real step = p1 / derivative;
      x -= step;
      if (std::abs(step) <= Real(4) * std::numeric_limits<Real>::epsilon()) break;
    }
    // Re-evaluate the derivative at the converged node for the weight.
    Real p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    derivative = n * (x * p1 - p0) / (x * x - 1);
    const Real w = Real(2) / ((1 - x * x) * derivative * derivative);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0;
  return rule;
}

}  // namespace graded
