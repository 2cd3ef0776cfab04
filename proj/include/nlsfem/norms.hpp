#pragma once

#include <algorithm>
#include <cmath>

#include "nlsfem/assembly.hpp"
#include "nlsfem/banded.hpp"
#include "nlsfem/fe_space.hpp"
#include "nlsfem/fields.hpp"
#include "nlsfem/types.hpp"

namespace nlsfem {

/// sqrt(x^H M x): the L2 norm of the FE function with coefficients x.
inline double m_norm(const BandedComplexMatrix& M, const FieldVector& x) {
  const Complex q = dot(matvec(M, x), x);
  return std::sqrt(std::max(0.0, q.real()));
}

/// Evaluate the FE function with coefficients u at an arbitrary point x.
inline Complex eval_fe(const FeSpace& space, const FieldVector& u, double x) {
  const auto& nodes = space.mesh().nodes;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  int e = static_cast<int>(std::clamp<std::ptrdiff_t>(it - nodes.begin() - 1, 0,
                                                      space.mesh().m() - 1));
  const double xi = (x - 0.5 * (nodes[e] + nodes[e + 1])) / space.element_jacobian(e);
  return space.eval_element(u, e, eval_basis(space.degree(), std::clamp(xi, -1.0, 1.0)));
}

/// ||U_h - exact(t,.)||_{L2} by elementwise quadrature. quad_order = 0 picks
/// the default p+4, two orders above assembly quadrature.
inline double error_l2(const FeSpace& space, const FieldVector& U, const ScalarField& exact,
                       double t, int quad_order = 0) {
  const int q = quad_order > 0 ? quad_order : space.degree() + 4;
  detail::TabulatedBasis tab(space.degree(), q);
  double acc = 0.0;
  for (int e = 0; e < space.mesh().m(); ++e) {
    const double jac = space.element_jacobian(e);
    for (int qp = 0; qp < tab.rule.size(); ++qp) {
      const double x = space.map_to_element(e, tab.rule.points[qp]);
      const Complex diff = space.eval_element(U, e, tab.at[qp]) - exact(t, x);
      acc += tab.rule.weights[qp] * jac * std::norm(diff);
    }
  }
  return std::sqrt(acc);
}

/// H1-seminorm of the error, ||d/dx U_h - d/dx exact(t,.)||_{L2}.
inline double error_h1(const FeSpace& space, const FieldVector& U, const ScalarField& exact,
                       double t, int quad_order = 0) {
  const int q = quad_order > 0 ? quad_order : space.degree() + 4;
  detail::TabulatedBasis tab(space.degree(), q);
  double acc = 0.0;
  for (int e = 0; e < space.mesh().m(); ++e) {
    const double jac = space.element_jacobian(e);
    for (int qp = 0; qp < tab.rule.size(); ++qp) {
      const double x = space.map_to_element(e, tab.rule.points[qp]);
      const Complex diff = space.eval_element_deriv(U, e, tab.at[qp]) - exact.eval_dx(t, x);
      acc += tab.rule.weights[qp] * jac * std::norm(diff);
    }
  }
  return std::sqrt(acc);
}

/// ||v(t,.)||_{L2(D)} for an analytic field, by composite quadrature on the
/// space's mesh. Defaults to the assembly order p+2 so that the discrete
/// boundedness ledger closes to roundoff against the assembled load.
inline double field_l2_norm(const FeSpace& space, const ScalarField& v, double t,
                            int quad_order = 0) {
  const int q = quad_order > 0 ? quad_order : space.quadrature_order();
  const QuadRule rule = gauss_rule(q);
  double acc = 0.0;
  for (int e = 0; e < space.mesh().m(); ++e) {
    const double jac = space.element_jacobian(e);
    for (int qp = 0; qp < rule.size(); ++qp) {
      const double x = space.map_to_element(e, rule.points[qp]);
      acc += rule.weights[qp] * jac * std::norm(v(t, x));
    }
  }
  return std::sqrt(acc);
}

}  // namespace nlsfem
