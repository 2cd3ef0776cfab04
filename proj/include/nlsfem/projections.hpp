#pragma once

#include "nlsfem/assembly.hpp"
#include "nlsfem/banded.hpp"
#include "nlsfem/fe_space.hpp"
#include "nlsfem/fields.hpp"

namespace nlsfem {

/// Elliptic (Ritz) projection R_h v: the S_h element with
/// (R_h v', chi') = (v', chi') for all chi. The right-hand side integrates
/// the analytic spatial derivative of v, so v must carry dx.
inline FieldVector ritz_project(const FeSpace& space, const ScalarField& v, double t) {
  if (!v.dx) throw MissingDerivative("ritz_project: v must provide its spatial derivative");
  detail::TabulatedBasis tab(space.degree(), space.quadrature_order());
  const int p = space.degree();
  FieldVector b(space.n_dof());
  for (int e = 0; e < space.mesh().m(); ++e) {
    for (int qp = 0; qp < tab.rule.size(); ++qp) {
      const double x = space.map_to_element(e, tab.rule.points[qp]);
      // jacobians cancel: w * jac * v'(x) * phi_j'(xi)/jac
      const Complex scale = tab.rule.weights[qp] * v.dx(t, x);
      const BasisEval& bas = tab.at[qp];
      for (int j = 0; j <= p; ++j) {
        const int J = space.dof(e, j);
        if (J != FeSpace::kBoundary) b[J] += scale * bas.deriv[j];
      }
    }
  }
  return band_lu(assemble_stiffness(space)).solve(b);
}

/// L2 projection: solves M x = (v, phi_j). Plumbing alternative to Ritz for
/// initial data; the scheme itself mandates Ritz.
inline FieldVector l2_project(const FeSpace& space, const ScalarField& v, double t) {
  FieldVector b = assemble_load(space, v, t);
  return band_lu(assemble_mass(space)).solve(b);
}

/// Discrete Laplacian: the S_h function y with (y, chi) = -(phi', chi').
inline FieldVector discrete_laplacian(const FeSpace& space, const FieldVector& phi) {
  FieldVector rhs = matvec(assemble_stiffness(space), phi);
  for (Complex& c : rhs.coeffs) c = -c;
  return band_lu(assemble_mass(space)).solve(rhs);
}

/// Nodal interpolant of v(t,.) onto S_h (test and verification helper).
inline FieldVector nodal_interpolant(const FeSpace& space, const ScalarField& v, double t) {
  FieldVector u(space.n_dof());
  for (int e = 0; e < space.mesh().m(); ++e) {
    for (int j = 0; j <= space.degree(); ++j) {
      const int J = space.dof(e, j);
      if (J != FeSpace::kBoundary) u[J] = v(t, space.node_coord(e, j));
    }
  }
  return u;
}

}  // namespace nlsfem
