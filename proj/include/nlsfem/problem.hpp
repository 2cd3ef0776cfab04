#pragma once

#include <optional>
#include <string>

#include "nlsfem/fields.hpp"

namespace nlsfem {

/// Initial/Dirichlet boundary value problem for
///   u_t = i*lap(u) + i*f(|u|^2)*u + g   on (0,T] x (a,b),
///   u = 0 on the boundary, u(0,.) = u0.
/// `exact`, when present, carries the manufactured solution and its
/// derivative bundle for verification.
struct NlsProblem {
  double a = 0.0;
  double b = 1.0;
  double T = 1.0;
  Nonlinearity f = Nonlinearity::cubic(0.0);
  ScalarField g = ScalarField::zero();
  ScalarField u0;  // evaluated at t = 0; must vanish at a and b and carry dx
  std::optional<ScalarField> exact;
};

/// Per-step ledger entry: ||U^n||_M in the discrete L2 sense and the L2 norm
/// of the forcing at the step midpoint, for the boundedness check.
struct StepRecord {
  int n = 0;
  double t = 0.0;
  double l2_norm = 0.0;
  double g_l2 = 0.0;
  double wall_time = 0.0;  // seconds spent in this step
};

}  // namespace nlsfem
