#pragma once

// Convenience glue for tests (not reference implementations).

#include <cmath>

#include "nlsfem/fe_space.hpp"
#include "nlsfem/fields.hpp"
#include "nlsfem/norms.hpp"

namespace testsupport {

/// Wraps an FE function as a time-independent ScalarField, with the exact
/// piecewise-polynomial derivative.
inline nlsfem::ScalarField fe_as_field(const nlsfem::FeSpace& space,
                                       const nlsfem::FieldVector& u) {
  nlsfem::ScalarField f;
  f.value = [&space, u](double, double x) { return nlsfem::eval_fe(space, u, x); };
  f.dx = [&space, u](double, double x) {
    const auto& nodes = space.mesh().nodes;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int e = static_cast<int>(std::clamp<std::ptrdiff_t>(it - nodes.begin() - 1, 0,
                                                        space.mesh().m() - 1));
    const double xi = (x - 0.5 * (nodes[e] + nodes[e + 1])) / space.element_jacobian(e);
    return space.eval_element_deriv(u, e,
                                    nlsfem::eval_basis(space.degree(), std::clamp(xi, -1.0, 1.0)));
  };
  return f;
}

/// log2(err_coarse / err_fine) for one halving step.
inline double halving_rate(double err_coarse, double err_fine) {
  return std::log2(err_coarse / err_fine);
}

}  // namespace testsupport
