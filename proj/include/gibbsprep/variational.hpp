#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gibbsprep/ansatz.hpp"
#include "gibbsprep/circuits.hpp"
#include "gibbsprep/fourierlog.hpp"
#include "gibbsprep/hamiltonians.hpp"
#include "gibbsprep/numkernel.hpp"
#include "gibbsprep/random.hpp"

namespace gibbsprep {

/// S(rho) = -sum_j p_j ln p_j (natural log, 0 ln 0 = 0).
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector& p = rho.eigenvalues();
  double s = 0.0;
  for (Index j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) s -= p[j] * std::log(p[j]);
  }
  return s;
}

enum class EntropyMode { Exact, FourierExact, FourierShots };

struct FourierEntropyEstimate {
  double value = 0.0;
  double min_eigenvalue = 0.0;
  /// False when the spectrum dips below the series' certified domain
  /// [p_min, 1]; the estimate is still returned, the bound just no longer
  /// applies.
  bool spectrum_in_domain = true;
};

/// Entropy from the Fourier series: S ~ -(constant + sum_m b1_m C_m +
/// b2_m S_m) where C_m, S_m are the circuit expectations Tr(rho cos(rho
/// t_m)), Tr(rho sin(rho t_m)) — exact in FourierExact mode, finite-shot
/// Bernoulli estimates in FourierShots mode. The series approximates ln p,
/// so the minus sign of S = -Tr(rho ln rho) is applied here, once.
inline FourierEntropyEstimate entropy_fourier_detailed(const DensityMatrix& rho,
                                                       const LogSeries& log_series,
                                                       EntropyMode mode,
                                                       long long shots_per_term = 0,
                                                       std::uint64_t seed = 0) {
  if (!log_series.certificate.passed) {
    throw std::invalid_argument("entropy_fourier: series certificate did not pass");
  }
  if (mode == EntropyMode::Exact) {
    throw std::invalid_argument("entropy_fourier: mode must be fourier_exact or fourier_shots");
  }
  if (mode == EntropyMode::FourierShots && shots_per_term < 1) {
    throw std::invalid_argument("entropy_fourier: shots_per_term must be >= 1 in shots mode");
  }
  const RealFourierSeries& s = log_series.series;
  double acc = s.constant;  // identity term, no measurement needed
  for (int m = 0; m < s.M; ++m) {
    double cm, sm;
    if (mode == EntropyMode::FourierExact) {
      cm = fourier_term_expectation(rho, s.t[m], TrigKind::Cos);
      sm = fourier_term_expectation(rho, s.t[m], TrigKind::Sin);
    } else {
      double pc = fourier_term_probability(rho, s.t[m], 0.0);
      double ps = fourier_term_probability(rho, s.t[m], -0.5 * M_PI);
      cm = sample_bernoulli(pc, shots_per_term, derive_seed(seed, m, 0)).estimate;
      sm = sample_bernoulli(ps, shots_per_term, derive_seed(seed, m, 1)).estimate;
    }
    acc += s.b1[m] * cm + s.b2[m] * sm;
  }
  FourierEntropyEstimate est;
  est.value = -acc;
  est.min_eigenvalue = rho.eigenvalues().minCoeff();
  est.spectrum_in_domain = est.min_eigenvalue >= log_series.p_min - 1e-12;
  return est;
}

inline double entropy_fourier(const DensityMatrix& rho, const LogSeries& log_series,
                              EntropyMode mode, long long shots_per_term = 0,
                              std::uint64_t seed = 0) {
  return entropy_fourier_detailed(rho, log_series, mode, shots_per_term, seed).value;
}

/// Tr(rho H), exact.
inline double average_energy(const DensityMatrix& rho, const PauliSum& h) {
  ComplexMatrix hm = to_matrix(h);
  if (hm.rows() != rho.dim()) throw std::invalid_argument("average_energy: dimension mismatch");
  return (rho.matrix() * hm).trace().real();
}

/// Energy through the purified LCU circuit: ||alpha||_1 (2 Pr(+1) - 1)
/// with the Hamiltonian acting on the system register of the purification.
inline double average_energy_estimated(const PureStateVector& purification,
                                       const LCUDecomposition& lcu) {
  double pr = energy_probability_purified(purification, lcu);
  return lcu.alpha_norm * (2.0 * pr - 1.0);
}

struct ObjectiveConfig {
  double beta = 1.0;
  double penalty_weight = 100.0;
  EntropyMode entropy_mode = EntropyMode::Exact;
  double p_min = 0.05;
  double series_eps = 1e-2;
  long long shots_per_term = 10000;
  std::uint64_t base_seed = 0;
};

/// F = Tr(rho H) - beta^{-1} S(rho) + lambda * violation, with rho the
/// reduced evolved ansatz state, S per the entropy mode and violation the
/// squared projection distance of the probability parameters.
inline double free_energy(const AnsatzParameters& params, const AdiabaticFamily& family,
                          const AnsatzConfig& acfg, const ObjectiveConfig& ocfg,
                          const LogSeries* series = nullptr,
                          std::uint64_t eval_seed = 0) {
  if (!(ocfg.beta > 0.0)) throw std::invalid_argument("free_energy: beta must be positive");
  auto [clamped, violation] = feasibility_projection(params);
  PureStateVector psi = evolve(clamped, family, acfg);
  DensityMatrix rho = reduced_state(psi, acfg.dim());
  double energy = average_energy(rho, interpolate(family, 1.0));
  double entropy;
  switch (ocfg.entropy_mode) {
    case EntropyMode::Exact:
      entropy = von_neumann_entropy(rho);
      break;
    case EntropyMode::FourierExact:
    case EntropyMode::FourierShots: {
      LogSeries local;
      if (series == nullptr) {
        local = build_log_series(ocfg.p_min, ocfg.series_eps);
        series = &local;
      }
      entropy = entropy_fourier(rho, *series, ocfg.entropy_mode, ocfg.shots_per_term, eval_seed);
      break;
    }
    default:
      throw std::invalid_argument("free_energy: unknown entropy mode");
  }
  return energy - entropy / ocfg.beta + ocfg.penalty_weight * violation;
}

/// Stateful objective: caches the Hamiltonian matrix and the certified
/// series, counts evaluations, and derives per-evaluation shot seeds from
/// (base_seed, evaluation index) so results do not depend on evaluation
/// order elsewhere.
class FreeEnergyObjective {
 public:
  FreeEnergyObjective(AdiabaticFamily family, AnsatzConfig acfg, ObjectiveConfig ocfg)
      : family_(std::move(family)),
        acfg_(acfg),
        ocfg_(ocfg),
        hamiltonian_(interpolate(family_, 1.0)),
        h_matrix_(to_matrix(hamiltonian_)) {
    if (!(ocfg_.beta > 0.0)) throw std::invalid_argument("objective: beta must be positive");
    if (!(ocfg_.penalty_weight > 0.0)) {
      throw std::invalid_argument("objective: penalty_weight must be positive");
    }
    if (ocfg_.entropy_mode != EntropyMode::Exact) {
      series_ = build_log_series(ocfg_.p_min, ocfg_.series_eps);
    }
  }

  Index n_params() const { return acfg_.r + acfg_.dim() - 1; }

  AnsatzParameters unpack(const RealVector& x) const {
    if (x.size() != n_params()) throw std::invalid_argument("objective: parameter size mismatch");
    return AnsatzParameters{x.head(acfg_.r), x.tail(acfg_.dim() - 1)};
  }

  RealVector pack(const AnsatzParameters& p) const {
    RealVector x(p.phi.size() + p.probs.size());
    x << p.phi, p.probs;
    return x;
  }

  double operator()(const RealVector& x) { return evaluate(unpack(x)); }

  double evaluate(const AnsatzParameters& params) {
    ++evaluations_;
    auto [clamped, violation] = feasibility_projection(params);
    DensityMatrix rho = reduced_state(evolve(clamped, family_, acfg_), acfg_.dim());
    double energy = (rho.matrix() * h_matrix_).trace().real();
    double entropy;
    if (ocfg_.entropy_mode == EntropyMode::Exact) {
      entropy = von_neumann_entropy(rho);
    } else {
      FourierEntropyEstimate est = entropy_fourier_detailed(
          rho, *series_, ocfg_.entropy_mode, ocfg_.shots_per_term,
          derive_seed(ocfg_.base_seed, static_cast<std::uint64_t>(evaluations_)));
      if (!est.spectrum_in_domain) ++spectrum_warnings_;
      entropy = est.value;
    }
    return energy - entropy / ocfg_.beta + ocfg_.penalty_weight * violation;
  }

  DensityMatrix state_for(const AnsatzParameters& params) const {
    auto [clamped, violation] = feasibility_projection(params);
    return reduced_state(evolve(clamped, family_, acfg_), acfg_.dim());
  }

  DensityMatrix state_for(const RealVector& x) const { return state_for(unpack(x)); }

  long evaluations() const { return evaluations_; }
  long spectrum_warnings() const { return spectrum_warnings_; }
  const AnsatzConfig& ansatz_config() const { return acfg_; }
  const ObjectiveConfig& objective_config() const { return ocfg_; }
  const AdiabaticFamily& family() const { return family_; }
  const PauliSum& hamiltonian() const { return hamiltonian_; }
  const std::optional<LogSeries>& series() const { return series_; }

 private:
  AdiabaticFamily family_;
  AnsatzConfig acfg_;
  ObjectiveConfig ocfg_;
  PauliSum hamiltonian_;
  ComplexMatrix h_matrix_;
  std::optional<LogSeries> series_;
  long evaluations_ = 0;
  long spectrum_warnings_ = 0;
};

struct GradientEstimate {
  RealVector g;
  double delta = 0.0;
};

/// Forward differences, N+1 objective evaluations.
inline GradientEstimate finite_diff_gradient(const std::function<double(const RealVector&)>& f,
                                             const RealVector& x, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("finite_diff_gradient: delta must be positive");
  double f0 = f(x);
  if (!std::isfinite(f0)) {
    throw std::runtime_error("finite_diff_gradient: objective not finite at base point");
  }
  GradientEstimate est;
  est.delta = delta;
  est.g.resize(x.size());
  RealVector xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + delta;
    double fi = f(xp);
    if (!std::isfinite(fi)) {
      throw std::runtime_error("finite_diff_gradient: objective not finite at coordinate " +
                               std::to_string(i));
    }
    est.g[i] = (fi - f0) / delta;
    xp[i] = x[i];
  }
  return est;
}

struct TraceRecord {
  long evals = 0;
  double best_f = 0.0;
  RealVector best_x;
};

struct OptimizationTrace {
  std::vector<TraceRecord> records;  // best-so-far, sampled every trace_interval evals
  RealVector best_x;
  double best_f = 0.0;
  long evaluations = 0;
  bool complete = true;   // false when the evaluation budget ran out
  int rate_halvings = 0;  // gradient-descent divergence guard activations
};

namespace detail {

struct BudgetExhausted {};

/// Counting wrapper shared by the optimizers: tracks the running best,
/// appends a trace record every `interval` evaluations, and stops the
/// caller via BudgetExhausted when the budget is spent.
class TracedObjective {
 public:
  TracedObjective(std::function<double(const RealVector&)> f, long max_evals, long interval)
      : f_(std::move(f)), max_evals_(max_evals), interval_(std::max(1L, interval)) {}

  double operator()(const RealVector& x) {
    if (max_evals_ > 0 && evals_ >= max_evals_) throw BudgetExhausted{};
    double v = f_(x);
    ++evals_;
    if (evals_ == 1 || v < best_f_) {
      best_f_ = v;
      best_x_ = x;
    }
    if (evals_ % interval_ == 0) records_.push_back({evals_, best_f_, best_x_});
    return v;
  }

  OptimizationTrace finish(bool complete) {
    if (records_.empty() || records_.back().evals != evals_) {
      records_.push_back({evals_, best_f_, best_x_});
    }
    OptimizationTrace tr;
    tr.records = std::move(records_);
    tr.best_x = best_x_;
    tr.best_f = best_f_;
    tr.evaluations = evals_;
    tr.complete = complete;
    return tr;
  }

  long evaluations() const { return evals_; }
  double best_f() const { return best_f_; }

 private:
  std::function<double(const RealVector&)> f_;
  long max_evals_;
  long interval_;
  long evals_ = 0;
  double best_f_ = 0.0;
  RealVector best_x_;
  std::vector<TraceRecord> records_;
};

inline constexpr double kGolden = 1.618033988749895;

struct Bracket {
  double a, b, c, fa, fb, fc;
};

/// Expands from (0, step) until the middle point is lower than both ends.
template <typename F1>
Bracket bracket_minimum(F1&& f1, double fa0, double step) {
  double a = 0.0, b = step, fa = fa0, fb = f1(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = b + kGolden * (b - a), fc = f1(c);
  int guard = 0;
  while (fc < fb && guard++ < 200) {
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + kGolden * (b - a);
    fc = f1(c);
  }
  return {a, b, c, fa, fb, fc};
}

/// Golden-section search inside a bracket; width tolerance 1e-8 plus an
/// early exit once the interval's function values are numerically flat,
/// below which further shrinking cannot move the minimum.
template <typename F1>
std::pair<double, double> golden_section(F1&& f1, const Bracket& br, double tol = 1e-8) {
  const double ratio = kGolden - 1.0, comp = 1.0 - ratio;
  double x0 = br.a, x3 = br.c, x1, x2, f1v, f2v;
  if (std::abs(br.c - br.b) > std::abs(br.b - br.a)) {
    x1 = br.b;
    f1v = br.fb;
    x2 = br.b + comp * (br.c - br.b);
    f2v = f1(x2);
  } else {
    x2 = br.b;
    f2v = br.fb;
    x1 = br.b - comp * (br.b - br.a);
    f1v = f1(x1);
  }
  int flat = 0;
  while (std::abs(x3 - x0) > tol * (1.0 + std::abs(x1) + std::abs(x2))) {
    if (f2v < f1v) {
      x0 = x1;
      x1 = x2;
      f1v = f2v;
      x2 = ratio * x1 + comp * x3;
      f2v = f1(x2);
    } else {
      x3 = x2;
      x2 = x1;
      f2v = f1v;
      x1 = ratio * x2 + comp * x0;
      f1v = f1(x1);
    }
    if (std::abs(f1v - f2v) <= 1e-13 * (1.0 + std::min(std::abs(f1v), std::abs(f2v)))) {
      if (++flat >= 3) break;
    } else {
      flat = 0;
    }
  }
  return f1v < f2v ? std::pair{x1, f1v} : std::pair{x2, f2v};
}

}  // namespace detail

/// Classic Powell conjugate-direction minimization with bracketing +
/// golden-section line searches (tolerance 1e-8) and a direction-set reset
/// every dim sweeps. Per-direction initial bracket steps adapt to the last
/// accepted move. Exhausting max_evals returns the best-so-far trace
/// flagged incomplete.
inline OptimizationTrace powell_minimize(const std::function<double(const RealVector&)>& objective,
                                         const RealVector& x0, double ftol, long max_evals,
                                         long trace_interval = 50) {
  const Index n = x0.size();
  if (n < 1) throw std::invalid_argument("powell_minimize: empty parameter vector");
  if (max_evals < n + 1) throw std::invalid_argument("powell_minimize: max_evals must be >= dim+1");

  detail::TracedObjective f(objective, max_evals, trace_interval);
  std::vector<RealVector> dirs(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) dirs[static_cast<std::size_t>(i)] = RealVector::Unit(n, i);
  std::vector<double> steps(static_cast<std::size_t>(n) + 1, 1.0);

  RealVector x = x0;
  bool complete = true;
  try {
    double fx = f(x);
    auto line_minimize = [&](const RealVector& dir, std::size_t slot) {
      auto f1 = [&](double alpha) { return f(x + alpha * dir); };
      detail::Bracket br = detail::bracket_minimum(f1, fx, steps[slot]);
      auto [alpha, falpha] = detail::golden_section(f1, br);
      steps[slot] = std::clamp(2.0 * std::abs(alpha), 1e-3, 1.0);
      if (falpha < fx) {
        x += alpha * dir;
        fx = falpha;
      }
    };

    long sweep = 0;
    while (true) {
      ++sweep;
      double f_start = fx;
      RealVector x_start = x;
      double biggest_drop = 0.0;
      std::size_t biggest_dir = 0;
      for (Index i = 0; i < n; ++i) {
        double f_before = fx;
        line_minimize(dirs[static_cast<std::size_t>(i)], static_cast<std::size_t>(i));
        if (f_before - fx > biggest_drop) {
          biggest_drop = f_before - fx;
          biggest_dir = static_cast<std::size_t>(i);
        }
      }
      if (2.0 * (f_start - fx) <= ftol * (std::abs(f_start) + std::abs(fx)) + 1e-25) break;

      RealVector d_new = x - x_start;
      double d_norm = d_new.norm();
      if (d_norm > 0.0) {
        double f_extrap = f(2.0 * x - x_start);
        if (f_extrap < f_start) {
          double t = 2.0 * (f_start - 2.0 * fx + f_extrap) *
                         std::pow(f_start - fx - biggest_drop, 2) -
                     biggest_drop * std::pow(f_start - f_extrap, 2);
          if (t < 0.0) {
            d_new /= d_norm;
            line_minimize(d_new, static_cast<std::size_t>(n));
            dirs[biggest_dir] = dirs[static_cast<std::size_t>(n) - 1];
            dirs[static_cast<std::size_t>(n) - 1] = d_new;
          }
        }
      }
      if (sweep % n == 0) {
        for (Index i = 0; i < n; ++i) dirs[static_cast<std::size_t>(i)] = RealVector::Unit(n, i);
      }
    }
  } catch (const detail::BudgetExhausted&) {
    complete = false;
  }
  return f.finish(complete);
}

/// Forward-difference gradient descent x <- x - eta g. If the objective
/// value rises for 10 consecutive steps the rate is halved and iteration
/// continues (halvings recorded in the trace).
inline OptimizationTrace gradient_descent(const std::function<double(const RealVector&)>& objective,
                                          const RealVector& x0, double eta, long iters, double tol,
                                          double fd_delta = 1e-4, long trace_interval = 50) {
  if (!(eta > 0.0)) throw std::invalid_argument("gradient_descent: eta must be positive");
  if (iters < 0) throw std::invalid_argument("gradient_descent: iters must be >= 0");

  detail::TracedObjective f(objective, 0, trace_interval);
  auto fwrap = [&f](const RealVector& x) { return f(x); };
  RealVector x = x0;
  int halvings = 0;
  int consecutive_increases = 0;
  double f_prev = f(x);
  for (long it = 0; it < iters; ++it) {
    GradientEstimate grad = finite_diff_gradient(fwrap, x, fd_delta);
    if (grad.g.norm() < tol) break;
    x -= eta * grad.g;
    double f_now = f(x);
    if (f_now > f_prev) {
      if (++consecutive_increases >= 10) {
        eta *= 0.5;
        ++halvings;
        consecutive_increases = 0;
      }
    } else {
      consecutive_increases = 0;
    }
    f_prev = f_now;
  }
  OptimizationTrace tr = f.finish(true);
  tr.rate_halvings = halvings;
  return tr;
}

struct InitSpec {
  enum class Kind { PerturbedTruth, Random };
  Kind kind = Kind::PerturbedTruth;
  double sigma = 0.1;
};

struct OptimizerSpec {
  enum class Kind { Powell, GradientDescent };
  Kind kind = Kind::Powell;
  double ftol = 1e-10;    // Powell fractional decrease tolerance
  double eta = 1e-2;      // gradient-descent rate
  double grad_tol = 1e-8;
  double fd_delta = 1e-4;
};

struct ExperimentRecord {
  long evals;
  double best_f;
  double delta_f;
  double trace_dist;
};

struct ExperimentResult {
  OptimizationTrace trace;
  std::vector<ExperimentRecord> records;
  AnsatzParameters best_params;
  DensityMatrix final_state;
  DensityMatrix gibbs;
  double f_gibbs;
  double final_delta_f;
  double final_trace_distance;
  long evaluations;
  long spectrum_warnings;
};

namespace detail {

/// Perturbed-truth start: Gibbs probabilities (descending) assigned to
/// basis states ranked by ascending H0 diagonal energy — the ordering the
/// adiabatic path preserves — plus Gaussian noise, re-projected. The path
/// starts near linear: tanh(phi_k) = k / (r + 1).
inline AnsatzParameters initial_parameters(const AdiabaticFamily& family,
                                           const AnsatzConfig& acfg, const InitSpec& init,
                                           double beta, Rng& rng) {
  Index d = acfg.dim();
  AnsatzParameters params{RealVector::Zero(acfg.r), RealVector::Zero(d - 1)};
  if (init.kind == InitSpec::Kind::Random) {
    RealVector p(d);
    for (Index j = 0; j < d; ++j) p[j] = -std::log(1.0 - rng.uniform());
    p /= p.sum();
    params.probs = p.head(d - 1);
    for (Index k = 0; k < acfg.r; ++k) params.phi[k] = rng.uniform(-2.0, 2.0);
    return params;
  }
  HermitianEig eig = hermitian_eig(to_matrix(interpolate(family, 1.0)));
  double emin = eig.values.minCoeff();
  RealVector q(d);
  for (Index j = 0; j < d; ++j) q[j] = std::exp(-beta * (eig.values[j] - emin));
  q /= q.sum();  // descending: ascending energies carry descending weights
  RealVector e0 = to_matrix(family.h0).diagonal().real();
  std::vector<Index> order(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return e0[a] < e0[b]; });
  RealVector pfull(d);
  for (Index k = 0; k < d; ++k) pfull[order[static_cast<std::size_t>(k)]] = q[k];
  params.probs = pfull.head(d - 1);
  for (Index j = 0; j < d - 1; ++j) params.probs[j] += init.sigma * rng.normal();
  for (Index k = 0; k < acfg.r; ++k) {
    params.phi[k] = std::atanh(static_cast<double>(k + 1) / (acfg.r + 1)) +
                    init.sigma * rng.normal();
  }
  params.probs = feasibility_projection(params).first.probs;
  return params;
}

}  // namespace detail

/// Runs one Gibbs-preparation experiment: initializes the ansatz, runs the
/// chosen optimizer for `budget` objective evaluations, and reports the
/// best-so-far free-energy gap and trace distance to the dense-oracle
/// Gibbs state at every trace record.
inline ExperimentResult run_experiment(const AdiabaticFamily& family, const AnsatzConfig& acfg,
                                       const ObjectiveConfig& ocfg, const InitSpec& init,
                                       const OptimizerSpec& opt, long budget, std::uint64_t seed,
                                       long trace_interval = 50) {
  if (acfg.n > 6) {
    throw std::invalid_argument("run_experiment: full-trace metrics limited to n <= 6");
  }
  PauliSum h = interpolate(family, 1.0);
  DensityMatrix gibbs = gibbs_state(h, ocfg.beta);
  double f_gibbs = -log_partition(h, ocfg.beta) / ocfg.beta;

  Rng rng(seed);
  AnsatzParameters start = detail::initial_parameters(family, acfg, init, ocfg.beta, rng);

  FreeEnergyObjective objective(family, acfg, ocfg);
  auto fn = [&objective](const RealVector& x) { return objective(x); };
  RealVector x0 = objective.pack(start);

  OptimizationTrace trace;
  if (opt.kind == OptimizerSpec::Kind::Powell) {
    trace = powell_minimize(fn, x0, opt.ftol, budget, trace_interval);
  } else {
    long iters = std::max(1L, (budget - 1) / (static_cast<long>(x0.size()) + 2));
    trace = gradient_descent(fn, x0, opt.eta, iters, opt.grad_tol, opt.fd_delta, trace_interval);
  }

  std::vector<ExperimentRecord> records;
  records.reserve(trace.records.size());
  for (const TraceRecord& rec : trace.records) {
    DensityMatrix rho = objective.state_for(rec.best_x);
    records.push_back({rec.evals, rec.best_f, rec.best_f - f_gibbs, trace_distance(rho, gibbs)});
  }
  AnsatzParameters best = objective.unpack(trace.best_x);
  DensityMatrix final_state = objective.state_for(best);
  double final_td = trace_distance(final_state, gibbs);
  double final_df = trace.best_f - f_gibbs;
  long evals = trace.evaluations;
  long warnings = objective.spectrum_warnings();
  return ExperimentResult{std::move(trace),  std::move(records), std::move(best),
                          std::move(final_state), std::move(gibbs), f_gibbs,
                          final_df,          final_td,          evals,
                          warnings};
}

}  // namespace gibbsprep
