#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nlsfem/banded.hpp"
#include "nlsfem/basis.hpp"
#include "nlsfem/errors.hpp"
#include "nlsfem/fe_space.hpp"
#include "nlsfem/fields.hpp"
#include "nlsfem/quadrature.hpp"

namespace nlsfem {

namespace detail {

// Basis values/derivatives tabulated at the quadrature points of one rule.
struct TabulatedBasis {
  QuadRule rule;
  std::vector<BasisEval> at;  // one entry per quadrature point

  TabulatedBasis(int degree, int q) : rule(gauss_rule(q)) {
    at.reserve(rule.size());
    for (double xi : rule.points) at.push_back(eval_basis(degree, xi));
  }
};

// Shared element loop for matrices of the form (w(x) phi_k, phi_j). The
// weight callback sees the element index and quadrature point index.
template <typename WeightFn>
BandedComplexMatrix assemble_weighted(const FeSpace& space, const TabulatedBasis& tab,
                                      WeightFn&& weight) {
  const int p = space.degree();
  BandedComplexMatrix M(space.n_dof(), p, p);
  for (int e = 0; e < space.mesh().m(); ++e) {
    const double jac = space.element_jacobian(e);
    for (int qp = 0; qp < tab.rule.size(); ++qp) {
      const double scale = tab.rule.weights[qp] * jac * weight(e, qp);
      const BasisEval& b = tab.at[qp];
      for (int j = 0; j <= p; ++j) {
        const int J = space.dof(e, j);
        if (J == FeSpace::kBoundary) continue;
        for (int k = 0; k <= p; ++k) {
          const int K = space.dof(e, k);
          if (K == FeSpace::kBoundary) continue;
          M.ref(J, K) += scale * b.value[j] * b.value[k];
        }
      }
    }
  }
  return M;
}

}  // namespace detail

/// Mass matrix M_jk = (phi_k, phi_j) on the free DOFs.
inline BandedComplexMatrix assemble_mass(const FeSpace& space) {
  detail::TabulatedBasis tab(space.degree(), space.quadrature_order());
  return detail::assemble_weighted(space, tab, [](int, int) { return 1.0; });
}

/// Stiffness matrix A_jk = (phi_k', phi_j').
inline BandedComplexMatrix assemble_stiffness(const FeSpace& space) {
  detail::TabulatedBasis tab(space.degree(), space.quadrature_order());
  const int p = space.degree();
  BandedComplexMatrix A(space.n_dof(), p, p);
  for (int e = 0; e < space.mesh().m(); ++e) {
    const double jac = space.element_jacobian(e);
    const double inv_jac = 1.0 / jac;
    for (int qp = 0; qp < tab.rule.size(); ++qp) {
      // one 1/jac from each derivative, one jac from dx
      const double scale = tab.rule.weights[qp] * inv_jac;
      const BasisEval& b = tab.at[qp];
      for (int j = 0; j <= p; ++j) {
        const int J = space.dof(e, j);
        if (J == FeSpace::kBoundary) continue;
        for (int k = 0; k <= p; ++k) {
          const int K = space.dof(e, k);
          if (K == FeSpace::kBoundary) continue;
          A.ref(J, K) += scale * b.deriv[j] * b.deriv[k];
        }
      }
    }
  }
  return A;
}

/// Nonlinearity-weighted mass matrix N_jk = (f(|W|^2) phi_k, phi_j), with W
/// the FE function of the given coefficients evaluated at quadrature points.
/// This is what keeps the scheme linear in the unknown: W is always a known
/// iterate.
inline BandedComplexMatrix assemble_weighted_mass(const FeSpace& space, const FieldVector& W,
                                                  const Nonlinearity& f) {
  if (static_cast<int>(W.size()) != space.n_dof()) {
    throw DimensionMismatch("assemble_weighted_mass: coefficient length mismatch");
  }
  detail::TabulatedBasis tab(space.degree(), space.quadrature_order());
  return detail::assemble_weighted(space, tab, [&](int e, int qp) {
    const Complex w = space.eval_element(W, e, tab.at[qp]);
    const double value = f.f(std::norm(w));
    if (!std::isfinite(value)) {
      throw NonFiniteWeight("assemble_weighted_mass: f(|W|^2) not finite at x = " +
                            std::to_string(space.map_to_element(e, tab.rule.points[qp])));
    }
    return value;
  });
}

/// Load vector b_j = (g(t,.), phi_j) by per-element quadrature of the exact
/// callable (g is never interpolated).
inline FieldVector assemble_load(const FeSpace& space, const ScalarField& g, double t) {
  detail::TabulatedBasis tab(space.degree(), space.quadrature_order());
  const int p = space.degree();
  FieldVector b(space.n_dof());
  for (int e = 0; e < space.mesh().m(); ++e) {
    const double jac = space.element_jacobian(e);
    for (int qp = 0; qp < tab.rule.size(); ++qp) {
      const double x = space.map_to_element(e, tab.rule.points[qp]);
      const Complex gv = g(t, x);
      if (!std::isfinite(gv.real()) || !std::isfinite(gv.imag())) {
        throw NonFiniteWeight("assemble_load: g not finite at x = " + std::to_string(x));
      }
      const Complex scale = tab.rule.weights[qp] * jac * gv;
      const BasisEval& bas = tab.at[qp];
      for (int j = 0; j <= p; ++j) {
        const int J = space.dof(e, j);
        if (J != FeSpace::kBoundary) b[J] += scale * bas.value[j];
      }
    }
  }
  return b;
}

}  // namespace nlsfem
