#pragma once

#include <array>
#include <cmath>
#include <string>

#include "nlsfem/errors.hpp"

namespace nlsfem {

/// Values and derivatives of the p+1 Lagrange shape functions at one
/// reference point. Shape i is 1 at reference node i and 0 at the others;
/// nodes are equispaced on [-1, 1].
struct BasisEval {
  int count = 0;
  std::array<double, 4> value{};
  std::array<double, 4> deriv{};
};

inline double reference_node(int degree, int i) {
  return -1.0 + 2.0 * i / degree;
}

inline BasisEval eval_basis(int degree, double ref_point) {
  if (degree < 1 || degree > 3) {
    throw InvalidArgument("eval_basis: degree must be 1, 2 or 3, got " + std::to_string(degree));
  }
  if (std::abs(ref_point) > 1.0 + 1e-12) {
    throw InvalidArgument("eval_basis: ref_point outside [-1, 1]");
  }

  BasisEval out;
  out.count = degree + 1;
  std::array<double, 4> node{};
  for (int i = 0; i <= degree; ++i) node[i] = reference_node(degree, i);

  for (int i = 0; i <= degree; ++i) {
    double v = 1.0;
    for (int k = 0; k <= degree; ++k) {
      if (k == i) continue;
      v *= (ref_point - node[k]) / (node[i] - node[k]);
    }
    out.value[i] = v;

    // L_i'(x) = sum_m 1/(x_i-x_m) * prod_{k != i,m} (x-x_k)/(x_i-x_k)
    double d = 0.0;
    for (int m = 0; m <= degree; ++m) {
      if (m == i) continue;
      double term = 1.0 / (node[i] - node[m]);
      for (int k = 0; k <= degree; ++k) {
        if (k == i || k == m) continue;
        term *= (ref_point - node[k]) / (node[i] - node[k]);
      }
      d += term;
    }
    out.deriv[i] = d;
  }
  return out;
}

}  // namespace nlsfem
