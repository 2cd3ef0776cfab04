#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "nlsfem/errors.hpp"
#include "nlsfem/manufactured.hpp"
#include "nlsfem/norms.hpp"
#include "nlsfem/stepper.hpp"
#include "nlsfem/time_grid.hpp"

namespace nlsfem {

/// How the time step is tied to the mesh width across study levels.
///   linear:   k ~ h      (the theorem's gradient-estimate regime)
///   balanced: k ~ h^{r/2} so the k^2 term does not mask the h^r spatial
///             order for r = 3.
enum class StepCoupling { linear, balanced };

struct StudyConfig {
  int degree = 1;
  int m0 = 8;
  int levels = 4;
  StepCoupling coupling = StepCoupling::linear;
  double time_jitter = 0.0;
  double mesh_jitter = 0.0;
  std::uint64_t seed = 1;
  bool max_over_time = false;  // default: errors at final time only
  int max_threads = 0;         // 0 = one thread per level
};

struct StudyLevel {
  int m = 0;
  double h = 0.0;
  double k = 0.0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
};

struct EocReport {
  std::vector<StudyLevel> levels;
  std::vector<double> rates_l2;  // one per successive level pair
  std::vector<double> rates_h1;
  double median_rate_l2 = 0.0;   // median excluding the coarsest pair
  double median_rate_h1 = 0.0;
};

struct ConsistencyReport {
  std::vector<double> ks;
  std::vector<double> r_half_norms;  // ||r^{n-1/2}||
  std::vector<double> r_full_norms;  // ||r^n||
  double fitted_order_half = 0.0;
  double fitted_order_full = 0.0;
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Median of the successive-pair rates, dropping the coarsest pair when
/// more than one is available (pre-asymptotic pollution).
inline double median_rate(const std::vector<double>& rates) {
  if (rates.size() <= 1) return median(rates);
  return median({rates.begin() + 1, rates.end()});
}

inline std::vector<double> pair_rates(const std::vector<double>& errs,
                                      const std::vector<double>& hs) {
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    rates.push_back(std::log(errs[i] / errs[i + 1]) / std::log(hs[i] / hs[i + 1]));
  }
  return rates;
}

/// Least-squares slope of log(y) against log(x), over positive samples.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

inline int steps_for(double T, double h, int r, StepCoupling coupling) {
  const double target = coupling == StepCoupling::linear ? h : std::pow(h, 0.5 * r);
  return std::max(1, static_cast<int>(std::llround(std::ceil(T / target - 1e-12))));
}

}  // namespace detail

/// Runs the solver on meshes m0*2^l, l = 0..levels-1, with the time grid
/// coupled to h, and reports final-time L2/H1 errors and successive rates.
/// Levels are independent; at most max_threads run concurrently.
inline EocReport convergence_study(const ManufacturedCase& mc, const StudyConfig& cfg) {
  if (cfg.levels < 3) throw InvalidArgument("convergence_study: need levels >= 3");
  if (!mc.problem.exact.has_value()) {
    throw InvalidArgument("convergence_study: case has no exact solution");
  }

  const int L = cfg.levels;
  std::vector<StudyLevel> levels(L);
  std::vector<std::exception_ptr> failures(L);

  auto run_level = [&](int l) {
    try {
      const int m = cfg.m0 << l;
      Mesh1D mesh = cfg.mesh_jitter > 0.0
                        ? build_perturbed_mesh(mc.problem.a, mc.problem.b, m, cfg.mesh_jitter,
                                               cfg.seed + static_cast<std::uint64_t>(l))
                        : build_uniform_mesh(mc.problem.a, mc.problem.b, m);
      FeSpace space(std::move(mesh), cfg.degree);
      const double h = space.mesh().h_max();
      const int r = cfg.degree + 1;
      const int N = detail::steps_for(mc.problem.T, h, r, cfg.coupling);
      TimeGrid grid = cfg.time_jitter > 0.0
                          ? TimeGrid::jittered(mc.problem.T, N, cfg.time_jitter,
                                               cfg.seed + 1000 + static_cast<std::uint64_t>(l))
                          : TimeGrid::uniform(mc.problem.T, N);

      const ScalarField& exact = mc.exact();
      double max_l2 = 0.0, max_h1 = 0.0;
      auto observer = [&](int, double t, const FieldVector& U) {
        max_l2 = std::max(max_l2, error_l2(space, U, exact, t));
        max_h1 = std::max(max_h1, error_h1(space, U, exact, t));
      };
      AdvanceResult res = advance(space, mc.problem, grid,
                                  cfg.max_over_time ? StepObserver(observer) : StepObserver{});

      StudyLevel& lv = levels[l];
      lv.m = m;
      lv.h = h;
      lv.k = grid.k_max();
      if (cfg.max_over_time) {
        lv.err_l2 = max_l2;
        lv.err_h1 = max_h1;
      } else {
        lv.err_l2 = error_l2(space, res.final, exact, grid.final_time());
        lv.err_h1 = error_h1(space, res.final, exact, grid.final_time());
      }
    } catch (...) {
      failures[l] = std::current_exception();
    }
  };

  const int want = cfg.max_threads > 0 ? std::min(cfg.max_threads, L) : L;
  if (want <= 1) {
    for (int l = 0; l < L; ++l) run_level(l);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (int t = 0; t < want; ++t) {
      pool.emplace_back([&] {
        for (int l; (l = next.fetch_add(1)) < L;) run_level(l);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (int l = 0; l < L; ++l) {
    if (failures[l]) {
      try {
        std::rethrow_exception(failures[l]);
      } catch (const std::exception& e) {
        throw Error("convergence_study: level " + std::to_string(l) + ": " + e.what());
      }
    }
  }

  EocReport rep;
  rep.levels = std::move(levels);
  std::vector<double> hs, e2, eh;
  for (const StudyLevel& lv : rep.levels) {
    hs.push_back(lv.h);
    e2.push_back(lv.err_l2);
    eh.push_back(lv.err_h1);
  }
  rep.rates_l2 = detail::pair_rates(e2, hs);
  rep.rates_h1 = detail::pair_rates(eh, hs);
  rep.median_rate_l2 = detail::median_rate(rep.rates_l2);
  rep.median_rate_h1 = detail::median_rate(rep.rates_h1);
  return rep;
}

/// Inserts the exact solution into the half/full step relations at a fixed
/// interior time and measures the defects
///   r^{n-1/2} = (u^{n-1/2}-u^{n-1})/(k/2) - i lap((u^{n-1/2}+u^{n-1})/2)
///               - i f(|u^{n-1}|^2)(u^{n-1/2}+u^{n-1})/2 - g(t_{n-1}),
///   r^n       = (u^n-u^{n-1})/k - i lap((u^n+u^{n-1})/2)
///               - i f(|u^{n-1/2}|^2)(u^n+u^{n-1})/2 - g(t_{n-1/2})
/// in L2 by composite quadrature, then fits log-log slopes against k.
inline ConsistencyReport consistency_residuals(const ManufacturedCase& mc,
                                               const std::vector<double>& ks,
                                               double t_base = 0.3, int cells = 256,
                                               int quad_points = 6) {
  if (!mc.problem.exact.has_value()) {
    throw InvalidArgument("consistency_residuals: case has no exact solution");
  }
  const ScalarField& u = mc.exact();
  if (!u.lap) throw MissingDerivative("consistency_residuals: exact solution must provide lap");
  if (!u.dt) throw MissingDerivative("consistency_residuals: exact solution must provide dt");
  const Nonlinearity& f = mc.problem.f;
  const ScalarField& g = mc.problem.g;

  const QuadRule rule = gauss_rule(quad_points);
  const double a = mc.problem.a, b = mc.problem.b;
  const double cell = (b - a) / cells;

  auto l2_of = [&](const std::function<Complex(double)>& fn) {
    double acc = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double xm = a + (c + 0.5) * cell;
      for (int qp = 0; qp < rule.size(); ++qp) {
        const double x = xm + 0.5 * cell * rule.points[qp];
        acc += rule.weights[qp] * 0.5 * cell * std::norm(fn(x));
      }
    }
    return std::sqrt(acc);
  };

  ConsistencyReport rep;
  rep.ks = ks;
  for (double k : ks) {
    const double t0 = t_base;          // t_{n-1}
    const double th = t_base + 0.5 * k;  // t_{n-1/2}
    const double t1 = t_base + k;      // t_n

    auto r_half = [&](double x) {
      const Complex u0 = u(t0, x), uh = u(th, x);
      const Complex mean = 0.5 * (uh + u0);
      const Complex lap_mean = 0.5 * (u.lap(th, x) + u.lap(t0, x));
      return (uh - u0) / (0.5 * k) - kImag * lap_mean -
             kImag * f.f(std::norm(u0)) * mean - g(t0, x);
    };
    auto r_full = [&](double x) {
      const Complex u0 = u(t0, x), uh = u(th, x), u1 = u(t1, x);
      const Complex mean = 0.5 * (u1 + u0);
      const Complex lap_mean = 0.5 * (u.lap(t1, x) + u.lap(t0, x));
      return (u1 - u0) / k - kImag * lap_mean - kImag * f.f(std::norm(uh)) * mean - g(th, x);
    };

    rep.r_half_norms.push_back(l2_of(r_half));
    rep.r_full_norms.push_back(l2_of(r_full));
  }

  rep.fitted_order_half = detail::loglog_slope(rep.ks, rep.r_half_norms);
  rep.fitted_order_full = detail::loglog_slope(rep.ks, rep.r_full_norms);
  return rep;
}

}  // namespace nlsfem
