#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nlsfem/assembly.hpp"
#include "nlsfem/banded.hpp"
#include "nlsfem/errors.hpp"
#include "nlsfem/fe_space.hpp"
#include "nlsfem/norms.hpp"
#include "nlsfem/problem.hpp"
#include "nlsfem/projections.hpp"
#include "nlsfem/time_grid.hpp"

// Two-level linearly implicit march. Each step solves two linear systems:
// a Crank-Nicolson half step with the nonlinearity frozen at U^{n-1}, then a
// full step with it frozen at the half-step iterate. Weak form sign
// convention: (u_t, chi) + i(u', chi') - i(f(|u|^2)u, chi) = (g, chi), so
// the discrete operators enter as 1/k*M + (i/2)(A - N) on the left.

namespace nlsfem {

/// Initialization: U^0 = R_h u0, the Ritz projection of the initial state.
inline FieldVector initial_data(const FeSpace& space, const NlsProblem& problem) {
  if (!problem.u0.has_value()) throw InvalidArgument("initial_data: u0 has no value callable");
  const double ua = std::abs(problem.u0(0.0, problem.a));
  const double ub = std::abs(problem.u0(0.0, problem.b));
  if (ua > 1e-10 || ub > 1e-10) {
    throw InvalidArgument("initial_data: u0 does not vanish at the boundary");
  }
  return ritz_project(space, problem.u0, 0.0);
}

/// Half step: solve
///   [2/k_n M + (i/2)(A - N(U^{n-1}))] U^{n-1/2}
///     = [2/k_n M - (i/2)(A - N(U^{n-1}))] U^{n-1} + G(t_{n-1}).
inline FieldVector half_step(const FeSpace& space, const BandedComplexMatrix& M,
                             const BandedComplexMatrix& A, const Nonlinearity& f,
                             const ScalarField& g, const FieldVector& U_prev, double t_prev,
                             double k_n) {
  if (!(k_n > 0.0)) throw InvalidArgument("half_step: need k_n > 0");
  const BandedComplexMatrix N = assemble_weighted_mass(space, U_prev, f);
  const BandedComplexMatrix K = combine(Complex{1.0, 0.0}, A, Complex{-1.0, 0.0}, N);
  const Complex two_over_k{2.0 / k_n, 0.0};
  const Complex half_i = 0.5 * kImag;
  const BandedComplexMatrix lhs = combine(two_over_k, M, half_i, K);
  const BandedComplexMatrix rhs_mat = combine(two_over_k, M, -half_i, K);
  const FieldVector rhs = matvec(rhs_mat, U_prev) + assemble_load(space, g, t_prev);
  return band_lu(lhs).solve(rhs);
}

/// Full step: solve
///   [1/k_n M + (i/2)(A - N(U^{n-1/2}))] U^n
///     = [1/k_n M - (i/2)(A - N(U^{n-1/2}))] U^{n-1} + G(t_{n-1/2}).
inline FieldVector full_step(const FeSpace& space, const BandedComplexMatrix& M,
                             const BandedComplexMatrix& A, const Nonlinearity& f,
                             const ScalarField& g, const FieldVector& U_prev,
                             const FieldVector& U_half, double t_prev, double k_n) {
  if (!(k_n > 0.0)) throw InvalidArgument("full_step: need k_n > 0");
  const BandedComplexMatrix N = assemble_weighted_mass(space, U_half, f);
  const BandedComplexMatrix K = combine(Complex{1.0, 0.0}, A, Complex{-1.0, 0.0}, N);
  const Complex one_over_k{1.0 / k_n, 0.0};
  const Complex half_i = 0.5 * kImag;
  const BandedComplexMatrix lhs = combine(one_over_k, M, half_i, K);
  const BandedComplexMatrix rhs_mat = combine(one_over_k, M, -half_i, K);
  const FieldVector rhs = matvec(rhs_mat, U_prev) + assemble_load(space, g, t_prev + 0.5 * k_n);
  return band_lu(lhs).solve(rhs);
}

struct AdvanceResult {
  FieldVector final;
  std::vector<StepRecord> records;  // n = 0 .. N
};

/// Optional per-level hook, called with (n, t_n, U^n) including n = 0.
using StepObserver = std::function<void(int n, double t, const FieldVector& U)>;

/// Projects the initial state, then for n = 1..N runs the half step followed
/// by the full step. Emits one StepRecord per level including the initial one.
inline AdvanceResult advance(const FeSpace& space, const NlsProblem& problem,
                             const TimeGrid& grid, const StepObserver& observer = {}) {
  using Clock = std::chrono::steady_clock;
  const BandedComplexMatrix M = assemble_mass(space);
  const BandedComplexMatrix A = assemble_stiffness(space);

  AdvanceResult out;
  out.final = initial_data(space, problem);
  out.records.push_back({0, 0.0, m_norm(M, out.final), 0.0, 0.0});
  if (observer) observer(0, 0.0, out.final);

  for (int n = 1; n <= grid.steps(); ++n) {
    const double t_prev = grid.nodes[n - 1];
    const double k_n = grid.step(n);
    const auto started = Clock::now();
    try {
      FieldVector U_half =
          half_step(space, M, A, problem.f, problem.g, out.final, t_prev, k_n);
      out.final = full_step(space, M, A, problem.f, problem.g, out.final, U_half, t_prev, k_n);
    } catch (const Error& err) {
      throw Error("advance: step n = " + std::to_string(n) + ", t = " +
                  std::to_string(grid.nodes[n]) + ": " + err.what());
    }
    const double wall = std::chrono::duration<double>(Clock::now() - started).count();
    out.records.push_back({n, grid.nodes[n], m_norm(M, out.final),
                           field_l2_norm(space, problem.g, grid.midpoint(n)), wall});
    if (observer) observer(n, grid.nodes[n], out.final);
  }
  return out;
}

}  // namespace nlsfem
