// Command-line front end: run | converge | consistency. Configuration comes
// from an optional JSON file plus flag overrides; results go to CSV and a
// JSON summary that echoes the effective configuration.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlsfem/nlsfem.hpp"

using nlohmann::ordered_json;

namespace {

using namespace nlsfem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  try {
    return ordered_json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

// Effective config = defaults, overlaid by the config file, overlaid by any
// flag the user actually passed.
class ConfigBuilder {
 public:
  explicit ConfigBuilder(ordered_json defaults) : cfg_(std::move(defaults)) {}

  void merge_file(const std::string& path) {
    if (path.empty()) return;
    ordered_json file = load_config_file(path);
    if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
    for (auto& [key, value] : file.items()) {
      if (!cfg_.contains(key)) throw ConfigError("unknown config key \"" + key + "\"");
      cfg_[key] = value;
    }
  }

  template <typename T>
  void override_flag(const CLI::Option* opt, const std::string& key, const T& value) {
    if (opt != nullptr && opt->count() > 0) cfg_[key] = value;
  }

  ordered_json& json() { return cfg_; }

  template <typename T>
  T get(const std::string& key) const {
    try {
      return cfg_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key \"" + key + "\": " + e.what());
    }
  }

 private:
  ordered_json cfg_;
};

struct OutputPaths {
  std::string csv;
  std::string json;
};

OutputPaths resolve_outputs(const ConfigBuilder& cfg) {
  auto outputs = cfg.get<std::vector<std::string>>("outputs");
  if (!outputs.empty()) {
    if (outputs.size() != 2) throw ConfigError("\"outputs\" must list [csv_path, json_path]");
    return {outputs[0], outputs[1]};
  }
  auto prefix = cfg.get<std::string>("out");
  return {prefix + ".csv", prefix + ".json"};
}

StepCoupling parse_coupling(const std::string& s) {
  if (s == "k~h") return StepCoupling::linear;
  if (s == "k~h^{r/2}") return StepCoupling::balanced;
  throw ConfigError("coupling must be \"k~h\" or \"k~h^{r/2}\", got \"" + s + "\"");
}

int env_thread_cap() {
  const char* env = std::getenv("NLS_THREADS");
  if (env == nullptr) return 0;
  try {
    int v = std::stoi(env);
    if (v < 1) throw ConfigError("NLS_THREADS must be >= 1");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("NLS_THREADS is not an integer");
  }
}

// Resolves "case" (builtin name) or "problem" (inline cubic NLS with zero
// forcing and a sine-mode initial state) into a problem definition.
NlsProblem resolve_problem(const ConfigBuilder& cfg, std::string& label) {
  const ordered_json& j = const_cast<ConfigBuilder&>(cfg).json();
  if (j.contains("problem") && !j["problem"].is_null()) {
    const ordered_json& p = j["problem"];
    for (const char* key : {"a", "b", "T", "lambda"}) {
      if (!p.contains(key)) throw ConfigError(std::string("inline problem needs \"") + key + "\"");
    }
    NlsProblem prob;
    prob.a = p["a"].get<double>();
    prob.b = p["b"].get<double>();
    prob.T = p["T"].get<double>();
    if (!(prob.a < prob.b) || !(prob.T > 0.0)) {
      throw ConfigError("inline problem needs a < b and T > 0");
    }
    prob.f = Nonlinearity::cubic(p["lambda"].get<double>());
    prob.g = ScalarField::zero();
    const double a = prob.a, len = prob.b - prob.a;
    ScalarField u0;
    u0.value = [a, len](double, double x) {
      return Complex{std::sin(M_PI * (x - a) / len), 0.0};
    };
    u0.dx = [a, len](double, double x) {
      return Complex{M_PI / len * std::cos(M_PI * (x - a) / len), 0.0};
    };
    prob.u0 = u0;
    label = "inline";
    return prob;
  }
  label = cfg.get<std::string>("case");
  try {
    return builtin_case(label).problem;
  } catch (const UnknownCase& e) {
    throw ConfigError(e.what());
  }
}

FeSpace make_space(const NlsProblem& prob, int degree, int m, double mesh_jitter,
                   std::uint64_t seed) {
  if (degree < 1 || degree > 3) throw ConfigError("degree must be 1, 2 or 3");
  if (m < 2) throw ConfigError("m must be >= 2");
  Mesh1D mesh = mesh_jitter > 0.0 ? build_perturbed_mesh(prob.a, prob.b, m, mesh_jitter, seed)
                                  : build_uniform_mesh(prob.a, prob.b, m);
  return FeSpace(std::move(mesh), degree);
}

int cmd_run(ConfigBuilder& cfg) {
  // config phase: any failure here is a usage error (exit 2)
  std::string label;
  NlsProblem prob = resolve_problem(cfg, label);
  const int degree = cfg.get<int>("degree");
  const int m = cfg.get<int>("m");
  const int steps = cfg.get<int>("steps");
  const double time_jitter = cfg.get<double>("time_jitter");
  const double mesh_jitter = cfg.get<double>("mesh_jitter");
  const auto seed = cfg.get<std::uint64_t>("seed");
  const bool timings = cfg.get<bool>("timings");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (time_jitter < 0.0 || time_jitter >= 0.5 || mesh_jitter < 0.0 || mesh_jitter >= 0.5) {
    throw ConfigError("jitter values must be in [0, 0.5)");
  }
  FeSpace space = make_space(prob, degree, m, mesh_jitter, seed);
  TimeGrid grid = time_jitter > 0.0 ? TimeGrid::jittered(prob.T, steps, time_jitter, seed + 1000)
                                    : TimeGrid::uniform(prob.T, steps);
  OutputPaths paths = resolve_outputs(cfg);

  const auto started = std::chrono::steady_clock::now();
  std::vector<double> err_l2_series, err_h1_series;
  StepObserver observer;
  if (prob.exact.has_value()) {
    observer = [&](int, double t, const FieldVector& U) {
      err_l2_series.push_back(error_l2(space, U, *prob.exact, t));
      err_h1_series.push_back(error_h1(space, U, *prob.exact, t));
    };
  }
  AdvanceResult res = advance(space, prob, grid, observer);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const bool with_err = prob.exact.has_value();
  write_text_file(paths.csv, run_csv(res.records, with_err ? &err_l2_series : nullptr,
                                     with_err ? &err_h1_series : nullptr, timings));

  double drift = 0.0;
  for (const StepRecord& r : res.records) {
    drift = std::max(drift, std::abs(r.l2_norm - res.records.front().l2_norm));
  }
  ordered_json summary;
  summary["command"] = "run";
  summary["config"] = cfg.json();
  ordered_json results;
  results["case"] = label;
  results["n_dof"] = space.n_dof();
  results["h_max"] = space.mesh().h_max();
  results["k_max"] = grid.k_max();
  results["mass_initial"] = res.records.front().l2_norm;
  results["mass_final"] = res.records.back().l2_norm;
  results["mass_drift_max"] = drift;
  if (with_err) {
    results["err_l2_final"] = err_l2_series.back();
    results["err_h1_final"] = err_h1_series.back();
  }
  results["wall_seconds"] = wall;
  summary["results"] = results;
  write_text_file(paths.json, summary.dump(2) + "\n");
  return 0;
}

int cmd_converge(ConfigBuilder& cfg) {
  const std::string name = cfg.get<std::string>("case");
  ManufacturedCase mc;
  try {
    mc = builtin_case(name);
  } catch (const UnknownCase& e) {
    throw ConfigError(e.what());
  }
  StudyConfig sc;
  sc.degree = cfg.get<int>("degree");
  sc.m0 = cfg.get<int>("m0");
  sc.levels = cfg.get<int>("levels");
  sc.coupling = parse_coupling(cfg.get<std::string>("coupling"));
  sc.time_jitter = cfg.get<double>("time_jitter");
  sc.mesh_jitter = cfg.get<double>("mesh_jitter");
  sc.seed = cfg.get<std::uint64_t>("seed");
  sc.max_over_time = cfg.get<bool>("max_over_time");
  sc.max_threads = env_thread_cap();
  if (sc.degree < 1 || sc.degree > 3) throw ConfigError("degree must be 1, 2 or 3");
  if (sc.levels < 3) throw ConfigError("levels must be >= 3");
  const double min_l2 = cfg.get<double>("min_rate_l2");
  const double min_h1 = cfg.get<double>("min_rate_h1");
  OutputPaths paths = resolve_outputs(cfg);

  EocReport rep = convergence_study(mc, sc);
  write_text_file(paths.csv, eoc_csv(rep));

  const bool l2_ok = !(rep.median_rate_l2 < min_l2);
  const bool h1_ok = !(rep.median_rate_h1 < min_h1);
  ordered_json summary;
  summary["command"] = "converge";
  summary["config"] = cfg.json();
  ordered_json results;
  results["median_rate_l2"] = rep.median_rate_l2;
  results["median_rate_h1"] = rep.median_rate_h1;
  ordered_json levels = ordered_json::array();
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const StudyLevel& lv = rep.levels[i];
    ordered_json row;
    row["level"] = i;
    row["m"] = lv.m;
    row["h"] = lv.h;
    row["k"] = lv.k;
    row["err_l2"] = lv.err_l2;
    row["err_h1"] = lv.err_h1;
    if (i > 0) {
      row["rate_l2"] = rep.rates_l2[i - 1];
      row["rate_h1"] = rep.rates_h1[i - 1];
    }
    levels.push_back(row);
  }
  results["levels"] = levels;
  results["thresholds_met"] = l2_ok && h1_ok;
  summary["results"] = results;
  write_text_file(paths.json, summary.dump(2) + "\n");

  if (!(l2_ok && h1_ok)) {
    std::cerr << "converge: measured rates below configured thresholds (l2 "
              << rep.median_rate_l2 << " vs " << min_l2 << ", h1 " << rep.median_rate_h1
              << " vs " << min_h1 << ")\n";
    return 3;
  }
  return 0;
}

int cmd_consistency(ConfigBuilder& cfg) {
  const std::string name = cfg.get<std::string>("case");
  ManufacturedCase mc;
  try {
    mc = builtin_case(name);
  } catch (const UnknownCase& e) {
    throw ConfigError(e.what());
  }
  auto ks = cfg.get<std::vector<double>>("ks");
  if (ks.size() < 2) throw ConfigError("need at least two k values");
  const double t_base = cfg.get<double>("t_base");
  const int cells = cfg.get<int>("cells");
  const int quad = cfg.get<int>("quad");
  auto band_half = cfg.get<std::vector<double>>("order_half_band");
  auto band_full = cfg.get<std::vector<double>>("order_full_band");
  if (band_half.size() != 2 || band_full.size() != 2) {
    throw ConfigError("order bands must be [lo, hi] pairs");
  }
  OutputPaths paths = resolve_outputs(cfg);

  ConsistencyReport rep = consistency_residuals(mc, ks, t_base, cells, quad);
  write_text_file(paths.csv, consistency_csv(rep));

  // an exactly-solved discrete relation yields residuals at roundoff; the
  // slope fit is meaningless there and the orders count as met
  double max_norm = 0.0;
  for (std::size_t i = 0; i < rep.ks.size(); ++i) {
    max_norm = std::max({max_norm, rep.r_half_norms[i], rep.r_full_norms[i]});
  }
  const bool degenerate = max_norm <= 1e-12;
  const bool half_ok =
      degenerate || (rep.fitted_order_half >= band_half[0] && rep.fitted_order_half <= band_half[1]);
  const bool full_ok =
      degenerate || (rep.fitted_order_full >= band_full[0] && rep.fitted_order_full <= band_full[1]);

  ordered_json summary;
  summary["command"] = "consistency";
  summary["config"] = cfg.json();
  ordered_json results;
  results["fitted_order_half"] = rep.fitted_order_half;
  results["fitted_order_full"] = rep.fitted_order_full;
  results["r_half_norms"] = rep.r_half_norms;
  results["r_full_norms"] = rep.r_full_norms;
  results["orders_met"] = half_ok && full_ok;
  summary["results"] = results;
  write_text_file(paths.json, summary.dump(2) + "\n");

  if (!(half_ok && full_ok)) {
    std::cerr << "consistency: fitted orders outside configured bands (half "
              << rep.fitted_order_half << ", full " << rep.fitted_order_full << ")\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level linearly implicit FEM solver for the 1-D nonlinear Schrodinger equation"};
  app.require_subcommand(1);

  std::string config_path, out, case_name, coupling;
  int degree = 0, m = 0, steps = 0, levels = 0, m0 = 0;
  double jitter = 0.0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--case", case_name, "built-in case: ms1 | free1 | zero");
    sub->add_option("--out", out, "output path prefix (<out>.csv, <out>.json)");
  };
  auto add_grid_flags = [&](CLI::App* sub) {
    sub->add_option("--degree", degree, "polynomial degree p in {1,2,3}");
    sub->add_option("--jitter", jitter, "time-grid jitter in [0, 0.5)");
    sub->add_option("--seed", seed, "RNG seed for jittered grids");
  };

  CLI::App* run = app.add_subcommand("run", "advance one configuration and write per-step records");
  add_common(run);
  add_grid_flags(run);
  run->add_option("--m", m, "element count");
  run->add_option("--steps", steps, "time step count");

  CLI::App* converge = app.add_subcommand("converge", "mesh/step refinement study (EOC table)");
  add_common(converge);
  add_grid_flags(converge);
  converge->add_option("--levels", levels, "number of refinement levels");
  converge->add_option("--m0", m0, "coarsest element count");
  converge->add_option("--coupling", coupling, "k~h or k~h^{r/2}");

  CLI::App* consistency =
      app.add_subcommand("consistency", "consistency-residual order fit for the scheme");
  add_common(consistency);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      ConfigBuilder cfg(ordered_json{{"case", "ms1"},
                                     {"problem", nullptr},
                                     {"degree", 1},
                                     {"m", 64},
                                     {"steps", 64},
                                     {"time_jitter", 0.0},
                                     {"mesh_jitter", 0.0},
                                     {"seed", 1},
                                     {"timings", false},
                                     {"out", "nls_run"},
                                     {"outputs", ordered_json::array()}});
      cfg.merge_file(config_path);
      cfg.override_flag(run->get_option("--case"), "case", case_name);
      cfg.override_flag(run->get_option("--degree"), "degree", degree);
      cfg.override_flag(run->get_option("--m"), "m", m);
      cfg.override_flag(run->get_option("--steps"), "steps", steps);
      cfg.override_flag(run->get_option("--jitter"), "time_jitter", jitter);
      cfg.override_flag(run->get_option("--seed"), "seed", seed);
      cfg.override_flag(run->get_option("--out"), "out", out);
      return cmd_run(cfg);
    }
    if (converge->parsed()) {
      ConfigBuilder cfg(ordered_json{{"case", "ms1"},
                                     {"degree", 1},
                                     {"m0", 8},
                                     {"levels", 4},
                                     {"coupling", "k~h"},
                                     {"time_jitter", 0.0},
                                     {"mesh_jitter", 0.0},
                                     {"seed", 1},
                                     {"max_over_time", false},
                                     {"min_rate_l2", 0.0},
                                     {"min_rate_h1", 0.0},
                                     {"out", "nls_converge"},
                                     {"outputs", ordered_json::array()}});
      cfg.merge_file(config_path);
      cfg.override_flag(converge->get_option("--case"), "case", case_name);
      cfg.override_flag(converge->get_option("--degree"), "degree", degree);
      cfg.override_flag(converge->get_option("--levels"), "levels", levels);
      cfg.override_flag(converge->get_option("--m0"), "m0", m0);
      cfg.override_flag(converge->get_option("--coupling"), "coupling", coupling);
      cfg.override_flag(converge->get_option("--jitter"), "time_jitter", jitter);
      cfg.override_flag(converge->get_option("--seed"), "seed", seed);
      cfg.override_flag(converge->get_option("--out"), "out", out);
      return cmd_converge(cfg);
    }
    ConfigBuilder cfg(ordered_json{{"case", "ms1"},
                                   {"ks", std::vector<double>{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64,
                                                              1.0 / 128, 1.0 / 256, 1.0 / 512}},
                                   {"t_base", 0.3},
                                   {"cells", 256},
                                   {"quad", 6},
                                   {"order_half_band", std::vector<double>{0.9, 1.1}},
                                   {"order_full_band", std::vector<double>{1.9, 2.1}},
                                   {"out", "nls_consistency"},
                                   {"outputs", ordered_json::array()}});
    cfg.merge_file(config_path);
    cfg.override_flag(consistency->get_option("--case"), "case", case_name);
    cfg.override_flag(consistency->get_option("--out"), "out", out);
    return cmd_consistency(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
