#pragma once

#include <cmath>
#include <string>

#include "nlsfem/errors.hpp"
#include "nlsfem/problem.hpp"

namespace nlsfem {

/// A problem with known exact solution and full derivative bundle, so that
/// errors, consistency residuals and convergence orders can be measured.
struct ManufacturedCase {
  std::string name;
  NlsProblem problem;
  std::string description;

  const ScalarField& exact() const { return *problem.exact; }
};

namespace detail {

inline ScalarField sine_mode_initial() {
  ScalarField u0;
  u0.value = [](double, double x) { return Complex{std::sin(M_PI * x), 0.0}; };
  u0.dx = [](double, double x) { return Complex{M_PI * std::cos(M_PI * x), 0.0}; };
  return u0;
}

}  // namespace detail

/// Built-in verification cases on D = (0,1), T = 1:
///   "ms1"   u = e^{it} sin(pi x), cubic f with lambda = 1, forcing
///           g = i u (1 + pi^2 - sin^2(pi x)) chosen so u solves the PDE;
///   "free1" u = e^{-i pi^2 t} sin(pi x), f = 0, g = 0 (free evolution of
///           the first Dirichlet eigenmode);
///   "zero"  u = 0, g = 0.
inline ManufacturedCase builtin_case(const std::string& name) {
  ManufacturedCase mc;
  mc.name = name;
  NlsProblem& p = mc.problem;
  p.a = 0.0;
  p.b = 1.0;
  p.T = 1.0;

  const double pi2 = M_PI * M_PI;

  if (name == "ms1") {
    mc.description = "rotating sine mode, cubic nonlinearity, manufactured forcing";
    auto u = [](double t, double x) {
      return std::exp(Complex{0.0, t}) * std::sin(M_PI * x);
    };
    ScalarField exact;
    exact.value = u;
    exact.dt = [u](double t, double x) { return kImag * u(t, x); };
    exact.dt2 = [u](double t, double x) { return -u(t, x); };
    exact.dt3 = [u](double t, double x) { return -kImag * u(t, x); };
    exact.dx = [](double t, double x) {
      return std::exp(Complex{0.0, t}) * (M_PI * std::cos(M_PI * x));
    };
    exact.lap = [u, pi2](double t, double x) { return -pi2 * u(t, x); };
    exact.lap_dt = [u, pi2](double t, double x) { return -pi2 * kImag * u(t, x); };
    exact.lap_dt2 = [u, pi2](double t, double x) { return pi2 * u(t, x); };

    ScalarField g;
    g.value = [u, pi2](double t, double x) {
      const double s = std::sin(M_PI * x);
      return kImag * u(t, x) * (1.0 + pi2 - s * s);
    };

    p.f = Nonlinearity::cubic(1.0);
    p.g = g;
    p.u0 = detail::sine_mode_initial();
    p.exact = exact;
  } else if (name == "free1") {
    mc.description = "free evolution of the first Dirichlet eigenmode";
    auto u = [pi2](double t, double x) {
      return std::exp(Complex{0.0, -pi2 * t}) * std::sin(M_PI * x);
    };
    ScalarField exact;
    exact.value = u;
    exact.dt = [u, pi2](double t, double x) { return -pi2 * kImag * u(t, x); };
    exact.dt2 = [u, pi2](double t, double x) { return -pi2 * pi2 * u(t, x); };
    exact.dt3 = [u, pi2](double t, double x) { return pi2 * pi2 * pi2 * kImag * u(t, x); };
    exact.dx = [pi2](double t, double x) {
      return std::exp(Complex{0.0, -pi2 * t}) * (M_PI * std::cos(M_PI * x));
    };
    exact.lap = [u, pi2](double t, double x) { return -pi2 * u(t, x); };
    exact.lap_dt = [u, pi2](double t, double x) { return pi2 * pi2 * kImag * u(t, x); };
    exact.lap_dt2 = [u, pi2](double t, double x) { return pi2 * pi2 * pi2 * u(t, x); };

    p.f = Nonlinearity::cubic(0.0);
    p.g = ScalarField::zero();
    p.u0 = detail::sine_mode_initial();
    p.exact = exact;
  } else if (name == "zero") {
    mc.description = "identically zero solution";
    p.f = Nonlinearity::cubic(1.0);
    p.g = ScalarField::zero();
    p.u0 = ScalarField::zero();
    p.exact = ScalarField::zero();
  } else {
    throw UnknownCase("builtin_case: unknown case \"" + name + "\"");
  }
  return mc;
}

}  // namespace nlsfem
