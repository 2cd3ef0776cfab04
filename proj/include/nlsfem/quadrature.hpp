#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nlsfem/errors.hpp"

namespace nlsfem {

/// Gauss-Legendre rule on the reference interval [-1, 1].
/// A q-point rule integrates polynomials of degree <= 2q-1 exactly and its
/// weights sum to 2.
struct QuadRule {
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

// Legendre P_q(x) and P_q'(x) by the three-term recurrence.
inline std::pair<double, double> legendre(int q, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= q; ++k) {
    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  double dp = q * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace detail

/// q-point Gauss-Legendre rule, q in [1, 8]. Nodes are Newton-refined roots
/// of P_q seeded from the Chebyshev estimate; the rule is symmetrized so
/// points come out ascending with exactly mirrored weights.
inline QuadRule gauss_rule(int q) {
  if (q < 1 || q > 8) {
    throw InvalidArgument("gauss_rule: q must be in [1, 8], got " + std::to_string(q));
  }
  QuadRule rule;
  rule.points.assign(q, 0.0);
  rule.weights.assign(q, 0.0);

  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    for (int it = 0; it < 60; ++it) {
      auto [p, dp] = detail::legendre(q, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, dp] = detail::legendre(q, x);
    (void)p;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;  // i = 0 refines the largest root
    rule.points[q - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) rule.points[q / 2] = 0.0;
  return rule;
}

}  // namespace nlsfem
