// Command-line front end: builds certified log series, runs the entropy
// estimators, prints query-cost reports, and drives full Gibbs-preparation
// experiments, emitting plot-ready CSV/JSON.

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "gibbsprep/gibbsprep.hpp"

namespace gp = gibbsprep;
using gp::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCertificate = 2;
constexpr int kExitInternal = 3;

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

gp::EntropyMode parse_mode(const std::string& mode) {
  if (mode == "exact") return gp::EntropyMode::Exact;
  if (mode == "fourier_exact") return gp::EntropyMode::FourierExact;
  if (mode == "fourier_shots") return gp::EntropyMode::FourierShots;
  throw std::invalid_argument("unknown entropy mode \"" + mode +
                              "\" (expected exact | fourier_exact | fourier_shots)");
}

json series_file_json(const gp::LogSeries& s) {
  json doc = s;
  doc["certificate"] = s.certificate;
  return doc;
}

gp::LogSeries load_series(const std::string& path) {
  json doc = json::parse(gp::read_file(path));
  gp::LogSeries s = doc.get<gp::LogSeries>();
  if (doc.contains("certificate")) s.certificate = doc["certificate"].get<gp::ErrorCertificate>();
  return s;
}

int cmd_series(double p_min, double eps, const std::string& out_path) {
  gp::LogSeries result;
  bool passed = true;
  try {
    result = gp::build_log_series(p_min, eps);
  } catch (const gp::CertificateError& e) {
    if (!e.result) throw;
    result = *e.result;
    passed = false;
  }
  gp::atomic_write_file(out_path, series_file_json(result).dump(2) + "\n");
  std::cout << json{{"out", out_path},
                    {"M", result.series.M},
                    {"certificate", result.certificate}}
                   .dump(2)
            << "\n";
  return passed ? kExitOk : kExitCertificate;
}

int cmd_estimate_entropy(const std::string& state_path, int random_qubits, double spectrum_floor,
                         const std::string& series_path, const std::string& mode_str,
                         long long shots, std::optional<std::uint64_t> seed_opt) {
  std::uint64_t seed = seed_opt.value_or(fresh_seed());
  gp::EntropyMode mode = parse_mode(mode_str);

  std::optional<gp::DensityMatrix> state;
  if (!state_path.empty()) {
    state = gp::density_matrix_from_json(json::parse(gp::read_file(state_path)));
  } else if (random_qubits > 0) {
    gp::Rng rng(gp::derive_seed(seed, 0x5741u));
    state = gp::random_density_matrix(gp::Index{1} << random_qubits, spectrum_floor, rng);
  } else {
    throw std::invalid_argument("estimate-entropy: provide --state or --random");
  }

  double exact = gp::von_neumann_entropy(*state);
  json out{{"exact_entropy", exact}, {"mode", mode_str}, {"seed", seed}};
  if (mode == gp::EntropyMode::Exact) {
    out["estimated_entropy"] = exact;
    out["abs_error"] = 0.0;
    if (!series_path.empty()) {
      out["cost_report"] = gp::entropy_estimation_cost(load_series(series_path));
    }
  } else {
    if (series_path.empty()) {
      throw std::invalid_argument("estimate-entropy: fourier modes need --series");
    }
    gp::LogSeries series = load_series(series_path);
    gp::FourierEntropyEstimate est =
        gp::entropy_fourier_detailed(*state, series, mode, shots, seed);
    out["estimated_entropy"] = est.value;
    out["abs_error"] = std::abs(est.value - exact);
    out["shots_per_term"] = shots;
    out["cost_report"] = gp::entropy_estimation_cost(series);
    if (!est.spectrum_in_domain) {
      out["warning"] = "state spectrum extends below the series domain [p_min, 1]";
      out["min_eigenvalue"] = est.min_eigenvalue;
    }
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_resources(double p_min, double eps, double alpha_norm) {
  json out{{"entropy_estimation", gp::entropy_estimation_cost(p_min, eps)},
           {"energy_estimation", gp::energy_estimation_cost(alpha_norm, eps)}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct ExperimentConfig {
  int n = 3;
  std::optional<std::uint64_t> seed;
  std::string hamiltonian_file;
  double beta = 1.0;
  int r = 5;
  double total_time = 5.0;
  double p_min = 0.05;
  double series_eps = 1e-2;
  std::string entropy_mode = "exact";
  long long shots_per_term = 10000;
  double penalty_weight = 100.0;
  std::string optimizer = "powell";
  long budget = 5000;
  std::string init_kind = "perturbed_truth";
  double sigma = 0.1;
  long trace_interval = 50;
  std::string coupling = "all_pairs";
  double delta_f_target = 0.05;
  double trace_distance_target = 0.1;
  std::string output_csv = "trace.csv";
  std::string output_json = "trace.json";
  std::string output_summary = "summary.json";
};

ExperimentConfig parse_experiment_config(const json& j) {
  reject_unknown_keys(
      j,
      {"n", "seed", "hamiltonian_file", "beta", "r", "total_time", "p_min", "series_eps",
       "entropy_mode", "shots_per_term", "penalty_weight", "optimizer", "budget", "init",
       "trace_interval", "coupling", "delta_f_target", "trace_distance_target", "output_csv",
       "output_json", "output_summary"},
      "experiment config");
  ExperimentConfig c;
  if (j.contains("n")) j.at("n").get_to(c.n);
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("hamiltonian_file")) j.at("hamiltonian_file").get_to(c.hamiltonian_file);
  if (j.contains("beta")) j.at("beta").get_to(c.beta);
  if (j.contains("r")) j.at("r").get_to(c.r);
  if (j.contains("total_time")) j.at("total_time").get_to(c.total_time);
  if (j.contains("p_min")) j.at("p_min").get_to(c.p_min);
  if (j.contains("series_eps")) j.at("series_eps").get_to(c.series_eps);
  if (j.contains("entropy_mode")) j.at("entropy_mode").get_to(c.entropy_mode);
  if (j.contains("shots_per_term")) j.at("shots_per_term").get_to(c.shots_per_term);
  if (j.contains("penalty_weight")) j.at("penalty_weight").get_to(c.penalty_weight);
  if (j.contains("optimizer")) j.at("optimizer").get_to(c.optimizer);
  if (j.contains("budget")) j.at("budget").get_to(c.budget);
  if (j.contains("init")) {
    const json& init = j.at("init");
    reject_unknown_keys(init, {"kind", "sigma"}, "init");
    if (init.contains("kind")) init.at("kind").get_to(c.init_kind);
    if (init.contains("sigma")) init.at("sigma").get_to(c.sigma);
  }
  if (j.contains("trace_interval")) j.at("trace_interval").get_to(c.trace_interval);
  if (j.contains("coupling")) j.at("coupling").get_to(c.coupling);
  if (j.contains("delta_f_target")) j.at("delta_f_target").get_to(c.delta_f_target);
  if (j.contains("trace_distance_target")) j.at("trace_distance_target").get_to(c.trace_distance_target);
  if (j.contains("output_csv")) j.at("output_csv").get_to(c.output_csv);
  if (j.contains("output_json")) j.at("output_json").get_to(c.output_json);
  if (j.contains("output_summary")) j.at("output_summary").get_to(c.output_summary);

  if (c.n < 1 || c.n > 6) throw std::invalid_argument("config: n must lie in [1, 6]");
  if (!(c.beta > 0)) throw std::invalid_argument("config: beta must be positive");
  if (c.r < 0) throw std::invalid_argument("config: r must be >= 0");
  if (!(c.total_time > 0)) throw std::invalid_argument("config: total_time must be positive");
  if (c.budget < 2) throw std::invalid_argument("config: budget must be >= 2");
  if (c.trace_interval < 1) throw std::invalid_argument("config: trace_interval must be >= 1");
  if (c.optimizer != "powell" && c.optimizer != "gradient_descent") {
    throw std::invalid_argument("config: optimizer must be powell | gradient_descent");
  }
  if (c.init_kind != "perturbed_truth" && c.init_kind != "random") {
    throw std::invalid_argument("config: init.kind must be perturbed_truth | random");
  }
  if (c.coupling != "all_pairs" && c.coupling != "chain") {
    throw std::invalid_argument("config: coupling must be all_pairs | chain");
  }
  parse_mode(c.entropy_mode);
  return c;
}

std::string trace_csv(const std::vector<gp::ExperimentRecord>& records) {
  std::ostringstream os;
  os << "evals,best_F,delta_F,trace_distance\n";
  os.precision(17);
  for (const auto& r : records) {
    os << r.evals << "," << r.best_f << "," << r.delta_f << "," << r.trace_dist << "\n";
  }
  return os.str();
}

int cmd_prepare_gibbs(const std::string& config_path) {
  json raw = json::parse(gp::read_file(config_path));
  ExperimentConfig cfg = parse_experiment_config(raw);
  std::uint64_t seed = cfg.seed.value_or(fresh_seed());
  if (!cfg.seed) std::cout << "generated seed: " << seed << "\n";

  std::optional<gp::AdiabaticFamily> family;
  if (!cfg.hamiltonian_file.empty()) {
    json fj = json::parse(gp::read_file(cfg.hamiltonian_file));
    reject_unknown_keys(fj, {"h0", "h1"}, "hamiltonian file");
    family.emplace(gp::pauli_sum_from_json(fj.at("h0")), gp::pauli_sum_from_json(fj.at("h1")));
    if (family->n() != cfg.n) {
      throw std::invalid_argument("config: hamiltonian_file qubit count disagrees with n");
    }
  } else {
    family.emplace(gp::random_instance(cfg.n, gp::derive_seed(seed, 0x494e5354u),
                                       cfg.coupling == "chain" ? gp::CouplingTopology::Chain
                                                               : gp::CouplingTopology::AllPairs));
  }

  gp::AnsatzConfig acfg(cfg.n, cfg.r, cfg.total_time);
  gp::ObjectiveConfig ocfg;
  ocfg.beta = cfg.beta;
  ocfg.penalty_weight = cfg.penalty_weight;
  ocfg.entropy_mode = parse_mode(cfg.entropy_mode);
  ocfg.p_min = cfg.p_min;
  ocfg.series_eps = cfg.series_eps;
  ocfg.shots_per_term = cfg.shots_per_term;
  ocfg.base_seed = gp::derive_seed(seed, 0x53484f54u);

  gp::InitSpec init;
  init.kind = cfg.init_kind == "random" ? gp::InitSpec::Kind::Random
                                        : gp::InitSpec::Kind::PerturbedTruth;
  init.sigma = cfg.sigma;
  gp::OptimizerSpec opt;
  opt.kind = cfg.optimizer == "powell" ? gp::OptimizerSpec::Kind::Powell
                                       : gp::OptimizerSpec::Kind::GradientDescent;

  gp::ExperimentResult result =
      gp::run_experiment(*family, acfg, ocfg, init, opt, cfg.budget,
                         gp::derive_seed(seed, 0x494e4954u), cfg.trace_interval);

  gp::atomic_write_file(cfg.output_csv, trace_csv(result.records));

  json resolved = raw;
  resolved["seed"] = seed;
  json records = json::array();
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    const gp::RealVector& x = result.trace.records[i].best_x;
    gp::AnsatzParameters rec_params{x.head(cfg.r), x.tail(x.size() - cfg.r)};
    records.push_back(json{{"evals", r.evals},
                           {"best_F", r.best_f},
                           {"delta_F", r.delta_f},
                           {"trace_distance", r.trace_dist},
                           {"best_params", rec_params}});
  }
  json summary{{"final_delta_f", result.final_delta_f},
               {"final_trace_distance", result.final_trace_distance},
               {"evaluations", result.evaluations},
               {"f_gibbs", result.f_gibbs},
               {"budget_exhausted", !result.trace.complete},
               {"spectrum_warnings", result.spectrum_warnings},
               {"converged", result.final_delta_f <= cfg.delta_f_target &&
                                 result.final_trace_distance <= cfg.trace_distance_target}};
  json full{{"config", resolved},
            {"hamiltonian", {{"h0", json(family->h0)}, {"h1", json(family->h1)}}},
            {"records", records},
            {"best_params", result.best_params},
            {"summary", summary}};
  gp::atomic_write_file(cfg.output_json, full.dump(2) + "\n");
  gp::atomic_write_file(cfg.output_summary, summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational Gibbs-state preparation by free-energy minimization"};
  app.require_subcommand(1);

  auto* series = app.add_subcommand("series", "Build a certified Fourier series for ln p");
  double s_pmin = 0.1, s_eps = 1e-2;
  std::string s_out = "series.json";
  series->add_option("--p-min", s_pmin, "Spectrum lower bound p_min in (0, 1)")->required();
  series->add_option("--eps", s_eps, "Target uniform error on [p_min, 1]")->required();
  series->add_option("--out", s_out, "Output path for the series document");

  auto* entropy = app.add_subcommand("estimate-entropy", "Estimate entropy of a density matrix");
  std::string e_state, e_series, e_mode = "fourier_exact";
  int e_random = 0;
  double e_floor = 0.05;
  long long e_shots = 10000;
  std::optional<std::uint64_t> e_seed;
  entropy->add_option("--state", e_state, "Density-matrix JSON file");
  entropy->add_option("--random", e_random, "Generate a random n-qubit state instead");
  entropy->add_option("--spectrum-floor", e_floor, "Eigenvalue floor for --random");
  entropy->add_option("--series", e_series, "Certified series JSON (fourier modes)");
  entropy->add_option("--mode", e_mode, "exact | fourier_exact | fourier_shots");
  entropy->add_option("--shots", e_shots, "Shots per Fourier term (fourier_shots)");
  entropy->add_option("--seed", e_seed, "Sampling seed");

  auto* resources = app.add_subcommand("resources", "Query-cost reports for both estimators");
  double r_pmin = 0.1, r_eps = 1e-2, r_alpha = 1.0;
  resources->add_option("--p-min", r_pmin, "Spectrum lower bound")->required();
  resources->add_option("--eps", r_eps, "Estimation precision")->required();
  resources->add_option("--alpha-norm", r_alpha, "LCU coefficient 1-norm")->required();

  auto* prepare = app.add_subcommand("prepare-gibbs", "Run a Gibbs-preparation experiment");
  std::string p_config;
  prepare->add_option("--config", p_config, "Experiment config JSON")->required();

  try {
    app.parse(argc, argv);
    if (series->parsed()) return cmd_series(s_pmin, s_eps, s_out);
    if (entropy->parsed()) {
      return cmd_estimate_entropy(e_state, e_random, e_floor, e_series, e_mode, e_shots, e_seed);
    }
    if (resources->parsed()) return cmd_resources(r_pmin, r_eps, r_alpha);
    if (prepare->parsed()) return cmd_prepare_gibbs(p_config);
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const gp::CertificateError& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return kExitCertificate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
