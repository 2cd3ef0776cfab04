// Acceptance suite: runs each release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlsfem/nlsfem.hpp"
#include "support/oracles.hpp"

#ifndef NLS_CLI_BIN
#error "NLS_CLI_BIN must point at the nls executable"
#endif

namespace fs = std::filesystem;
using namespace nlsfem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// ------------------------------------------------------------ criteria ----

Outcome l2_convergence_p1(double jitter, double need) {
  ManufacturedCase mc = builtin_case("ms1");
  StudyConfig cfg;
  cfg.degree = 1;
  cfg.m0 = 8;
  cfg.levels = 5;  // m = 8..128
  cfg.coupling = StepCoupling::linear;
  cfg.time_jitter = jitter;
  cfg.seed = 7;
  EocReport rep = convergence_study(mc, cfg);
  return {rep.median_rate_l2 >= need,
          "median L2 EOC " + fmt(rep.median_rate_l2) + " (need >= " + fmt(need) + ")"};
}

Outcome criterion_l2_p1() { return l2_convergence_p1(0.0, 1.9); }

Outcome criterion_l2_p2() {
  ManufacturedCase mc = builtin_case("ms1");
  StudyConfig cfg;
  cfg.degree = 2;
  cfg.m0 = 8;
  cfg.levels = 4;  // m = 8..64
  cfg.coupling = StepCoupling::balanced;
  EocReport rep = convergence_study(mc, cfg);
  return {rep.median_rate_l2 >= 2.8,
          "median L2 EOC " + fmt(rep.median_rate_l2) + " (need >= 2.8)"};
}

Outcome criterion_h1_p1() {
  ManufacturedCase mc = builtin_case("ms1");
  StudyConfig cfg;
  cfg.degree = 1;
  cfg.m0 = 8;
  cfg.levels = 5;
  cfg.coupling = StepCoupling::linear;
  EocReport rep = convergence_study(mc, cfg);
  return {rep.median_rate_h1 >= 0.9,
          "median H1 EOC " + fmt(rep.median_rate_h1) + " (need >= 0.9)"};
}

Outcome criterion_consistency() {
  ManufacturedCase mc = builtin_case("ms1");
  std::vector<double> ks;
  for (int e = 3; e <= 9; ++e) ks.push_back(std::pow(2.0, -e));
  ConsistencyReport rep = consistency_residuals(mc, ks);
  const bool full_ok = rep.fitted_order_full >= 1.9 && rep.fitted_order_full <= 2.1;
  const bool half_ok = rep.fitted_order_half >= 0.9 && rep.fitted_order_half <= 1.1;
  return {full_ok && half_ok, "order(r^n) " + fmt(rep.fitted_order_full) +
                                  " in [1.9,2.1], order(r^{n-1/2}) " +
                                  fmt(rep.fitted_order_half) + " in [0.9,1.1]"};
}

Outcome criterion_mass_conservation() {
  double worst = 0.0;
  for (const std::string variant : {"free1", "ms1_no_g"}) {
    NlsProblem prob;
    if (variant == "free1") {
      prob = builtin_case("free1").problem;
    } else {
      prob = builtin_case("ms1").problem;  // keep cubic f and u0, drop forcing
      prob.g = ScalarField::zero();
      prob.exact.reset();
    }
    FeSpace space(build_uniform_mesh(prob.a, prob.b, 48), 1);
    AdvanceResult res = advance(space, prob, TimeGrid::uniform(prob.T, 200));
    const double norm0 = res.records.front().l2_norm;
    for (const StepRecord& r : res.records) {
      worst = std::max(worst, std::abs(r.l2_norm - norm0));
    }
  }
  return {worst <= 1e-10, "max |mass drift| " + fmt(worst) + " over 200 steps (need <= 1e-10)"};
}

Outcome criterion_boundedness() {
  NlsProblem prob = builtin_case("ms1").problem;
  FeSpace space(build_uniform_mesh(prob.a, prob.b, 48), 1);
  TimeGrid grid = TimeGrid::uniform(prob.T, 100);
  AdvanceResult res = advance(space, prob, grid);
  double ledger = res.records.front().l2_norm;
  double worst_excess = 0.0;
  for (int n = 1; n <= grid.steps(); ++n) {
    ledger += grid.step(n) * res.records[n].g_l2;
    worst_excess = std::max(worst_excess, res.records[n].l2_norm - ledger);
  }
  return {worst_excess <= 1e-8,
          "max excess over the g-ledger " + fmt(worst_excess) + " (need <= 1e-8)"};
}

Outcome criterion_ritz_rates() {
  ScalarField v;
  v.value = [](double, double x) { return Complex{std::sin(M_PI * x), 0.0}; };
  v.dx = [](double, double x) { return Complex{M_PI * std::cos(M_PI * x), 0.0}; };
  std::vector<double> hs, el2, eh1;
  for (int m : {8, 16, 32, 64, 128}) {
    FeSpace s(build_uniform_mesh(0.0, 1.0, m), 1);
    FieldVector proj = ritz_project(s, v, 0.0);
    hs.push_back(s.mesh().h_max());
    el2.push_back(error_l2(s, proj, v, 0.0));
    eh1.push_back(error_h1(s, proj, v, 0.0));
  }
  const double r2 = detail::median_rate(detail::pair_rates(el2, hs));
  const double r1 = detail::median_rate(detail::pair_rates(eh1, hs));
  return {r2 >= 1.95 && r1 >= 0.95,
          "Ritz L2 EOC " + fmt(r2) + " (need >= 1.95), H1 EOC " + fmt(r1) + " (need >= 0.95)"};
}

Outcome criterion_lemma_bound() {
  testsupport::Rng rng(51);
  const Nonlinearity f = Nonlinearity::cubic(1.0);
  FeSpace s(build_uniform_mesh(0.0, 1.0, 12), 2);
  detail::TabulatedBasis tab(s.degree(), s.degree() + 4);
  int violations = 0;
  double tightest = 1e300;
  for (int trial = 0; trial < 500; ++trial) {
    FieldVector u1(s.n_dof()), u2(s.n_dof());
    for (int i = 0; i < s.n_dof(); ++i) {
      u1[i] = 3.0 * rng.complex_box();
      u2[i] = 3.0 * rng.complex_box();
    }
    double lhs2 = 0.0, diff2 = 0.0, sup1 = 0.0, sup2 = 0.0;
    for (int e = 0; e < s.mesh().m(); ++e) {
      const double jac = s.element_jacobian(e);
      for (int qp = 0; qp < tab.rule.size(); ++qp) {
        const Complex a = s.eval_element(u1, e, tab.at[qp]);
        const Complex b = s.eval_element(u2, e, tab.at[qp]);
        lhs2 += tab.rule.weights[qp] * jac * std::pow(f.f(std::norm(a)) - f.f(std::norm(b)), 2);
        diff2 += tab.rule.weights[qp] * jac * std::norm(a - b);
        sup1 = std::max(sup1, std::abs(a));
        sup2 = std::max(sup2, std::abs(b));
      }
    }
    // cubic f: sup |f'| = |lambda| on I(u1, u2)
    const double rhs = std::abs(f.lambda) * (sup1 + sup2) * std::sqrt(diff2);
    if (std::sqrt(lhs2) > rhs * (1.0 + 1e-12) + 1e-15) ++violations;
    if (rhs > 0.0) tightest = std::min(tightest, rhs - std::sqrt(lhs2));
  }
  return {violations == 0, violations == 0
                               ? "500/500 pairs satisfy the bound (closest margin " +
                                     fmt(tightest) + ")"
                               : std::to_string(violations) + " violations of 500"};
}

Outcome criterion_cn_oracle() {
  NlsProblem prob = builtin_case("free1").problem;
  const int m = 48;  // n_dof = 47 <= 50
  FeSpace s(build_uniform_mesh(0.0, 1.0, m), 1);
  AdvanceResult res = advance(s, prob, TimeGrid::uniform(1.0, 1));

  testsupport::OracleSpace os;
  os.mesh = s.mesh().nodes;
  os.p = 1;
  auto M = testsupport::oracle_mass(os);
  auto A = testsupport::oracle_stiffness(os);
  auto b = testsupport::oracle_ritz_rhs(
      os, [](double x) { return Complex{M_PI * std::cos(M_PI * x), 0.0}; });
  auto U1 = testsupport::oracle_cn_step(M, A, 1.0, testsupport::dense_solve(A, b));

  double diff = 0.0;
  for (int i = 0; i < s.n_dof(); ++i) diff += std::norm(res.final[i] - U1[i]);
  diff = std::sqrt(diff);
  return {diff <= 1e-11, "|advance - dense CN| " + fmt(diff) + " (need <= 1e-11)"};
}

Outcome criterion_linalg() {
  testsupport::Rng rng(4242);
  double worst_residual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 200);
    const int kw = rng.integer(0, 3);
    BandedComplexMatrix A(n, kw, kw);
    for (int j = 0; j < n; ++j) {
      for (int i = std::max(0, j - kw); i <= std::min(n - 1, j + kw); ++i) {
        A.ref(i, j) = rng.complex_box();
      }
      A.ref(j, j) += 4.0;  // keep the ensemble uniformly well-posed
    }
    FieldVector bvec(n);
    for (int i = 0; i < n; ++i) bvec[i] = rng.complex_box();
    FieldVector x = band_solve(band_lu(A), bvec);
    worst_residual = std::max(worst_residual, norm2(matvec(A, x) - bvec) / norm2(bvec));
  }

  double worst_agreement = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.integer(2, 50);
    const int kl = rng.integer(0, 3), ku = rng.integer(0, 3);
    BandedComplexMatrix A(n, kl, ku);
    testsupport::DenseMatrix D(n);
    for (int j = 0; j < n; ++j) {
      for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) {
        A.ref(i, j) = rng.complex_box();
      }
      A.ref(j, j) += 4.0;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) D.at(i, j) = A.at(i, j);
    }
    FieldVector bvec(n);
    for (int i = 0; i < n; ++i) bvec[i] = rng.complex_box();
    FieldVector x = band_solve(band_lu(A), bvec);
    auto xd = testsupport::dense_solve(D, bvec.coeffs);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
      diff += std::norm(x[i] - xd[i]);
      scale += std::norm(xd[i]);
    }
    worst_agreement = std::max(worst_agreement, std::sqrt(diff / scale));
  }
  const bool ok = worst_residual <= 1e-11 && worst_agreement <= 1e-11;
  return {ok, "worst round-trip residual " + fmt(worst_residual) + ", worst dense agreement " +
                  fmt(worst_agreement) + " (need <= 1e-11)"};
}

Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "nlsfem_acceptance";
  fs::create_directories(dir);
  auto invoke = [&](const std::string& tag) {
    const std::string out = (dir / tag).string();
    const std::string cmd = std::string(NLS_CLI_BIN) +
                            " run --case ms1 --m 32 --steps 24 --jitter 0.25 --seed 11 --out " +
                            out + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0 ? out + ".csv" : std::string{};
  };
  const std::string first = invoke("det_a");
  const std::string second = invoke("det_b");
  if (first.empty() || second.empty()) return {false, "CLI invocation failed"};
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(first), b = slurp(second);
  const bool ok = !a.empty() && a == b;
  return {ok, ok ? "two invocations, byte-identical CSV (" + std::to_string(a.size()) + " bytes)"
                 : "CSV outputs differ"};
}

Outcome criterion_jittered_grid() { return l2_convergence_p1(0.3, 1.85); }

}  // namespace

int main() {
  struct Entry {
    std::string name;
    std::function<Outcome()> run;
    double time_limit;  // seconds; 0 = none
  };
  const std::vector<Entry> criteria = {
      {"L2 convergence, ms1 P1 k~h m=8..128", criterion_l2_p1, 30.0},
      {"L2 convergence, ms1 P2 k~h^{r/2} m=8..64", criterion_l2_p2, 60.0},
      {"H1 convergence, ms1 P1 k~h", criterion_h1_p1, 0.0},
      {"consistency orders, ms1 k=2^-3..2^-9", criterion_consistency, 5.0},
      {"mass conservation, free1 + ms1 without forcing", criterion_mass_conservation, 0.0},
      {"boundedness ledger, ms1 100 steps", criterion_boundedness, 0.0},
      {"Ritz projection rates, sin(pi x) P1", criterion_ritz_rates, 0.0},
      {"nonlinearity difference bound, 500 pairs", criterion_lemma_bound, 0.0},
      {"dense Crank-Nicolson oracle equivalence", criterion_cn_oracle, 0.0},
      {"banded linear algebra suite", criterion_linalg, 0.0},
      {"bit-identical CSV determinism", criterion_determinism, 0.0},
      {"L2 convergence under time jitter 0.3", criterion_jittered_grid, 0.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto started = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    bool pass = out.pass;
    std::string detail = out.detail;
    if (criteria[i].time_limit > 0.0) {
      detail += ", " + fmt(secs) + " s (limit " + fmt(criteria[i].time_limit) + " s)";
      if (secs >= criteria[i].time_limit) pass = false;
    }
    if (!pass) ++failures;
    std::cout << "[" << (i + 1 < 10 ? " " : "") << i + 1 << "/12] "
              << (pass ? "PASS" : "FAIL") << "  " << criteria[i].name << ": " << detail << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures;
}
