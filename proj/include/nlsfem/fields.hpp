#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "nlsfem/errors.hpp"
#include "nlsfem/types.hpp"

namespace nlsfem {

/// Real nonlinearity f acting on |u|^2, as in u_t = i*lap(u) + i*f(|u|^2)*u + g.
/// f maps [0, inf) to R; the cubic NLS is f(x) = lambda*x.
struct Nonlinearity {
  enum class Kind { Cubic, Power, Custom };

  Kind kind = Kind::Cubic;
  double lambda = 0.0;
  double sigma = 1.0;
  std::function<double(double)> f;
  std::function<double(double)> fprime;

  static Nonlinearity cubic(double lambda) {
    Nonlinearity n;
    n.kind = Kind::Cubic;
    n.lambda = lambda;
    n.f = [lambda](double x) { return lambda * x; };
    n.fprime = [lambda](double) { return lambda; };
    return n;
  }

  static Nonlinearity power(double lambda, double sigma) {
    Nonlinearity n;
    n.kind = Kind::Power;
    n.lambda = lambda;
    n.sigma = sigma;
    n.f = [lambda, sigma](double x) { return lambda * std::pow(x, sigma); };
    n.fprime = [lambda, sigma](double x) {
      return lambda * sigma * std::pow(x, sigma - 1.0);
    };
    return n;
  }

  static Nonlinearity custom(std::function<double(double)> f,
                             std::function<double(double)> fprime) {
    Nonlinearity n;
    n.kind = Kind::Custom;
    n.f = std::move(f);
    n.fprime = std::move(fprime);
    return n;
  }
};

/// A (t, x) -> C callable plus the optional analytic derivatives the
/// verification layer needs (Ritz projection wants dx; the consistency
/// residuals want time derivatives and the Laplacian).
struct ScalarField {
  using Fn = std::function<Complex(double t, double x)>;

  Fn value;
  Fn dt;       // d/dt
  Fn dt2;      // d^2/dt^2
  Fn dt3;      // d^3/dt^3
  Fn dx;       // d/dx
  Fn lap;      // Laplacian (d^2/dx^2 in 1-D)
  Fn lap_dt;   // Laplacian of d/dt
  Fn lap_dt2;  // Laplacian of d^2/dt^2

  bool has_value() const { return static_cast<bool>(value); }

  Complex operator()(double t, double x) const { return value(t, x); }

  const Fn& require(const Fn& fn, const char* name) const {
    if (!fn) throw MissingDerivative(std::string("ScalarField: missing ") + name);
    return fn;
  }

  Complex eval_dx(double t, double x) const { return require(dx, "dx")(t, x); }
  Complex eval_dt(double t, double x) const { return require(dt, "dt")(t, x); }
  Complex eval_lap(double t, double x) const { return require(lap, "lap")(t, x); }

  static ScalarField zero() {
    ScalarField f;
    auto z = [](double, double) { return Complex{0.0, 0.0}; };
    f.value = z;
    f.dt = z;
    f.dt2 = z;
    f.dt3 = z;
    f.dx = z;
    f.lap = z;
    f.lap_dt = z;
    f.lap_dt2 = z;
    return f;
  }
};

}  // namespace nlsfem
