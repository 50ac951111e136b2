#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace gibbsprep;
using namespace gptest;
using Catch::Approx;

namespace {

AnsatzParameters params_of(std::vector<double> phi, std::vector<double> probs) {
  AnsatzParameters p;
  p.phi = Eigen::Map<const RealVector>(phi.data(), static_cast<Index>(phi.size()));
  p.probs = Eigen::Map<const RealVector>(probs.data(), static_cast<Index>(probs.size()));
  return p;
}

const LogSeries& shared_series_01() {
  static LogSeries s = build_log_series(0.1, 1e-3);
  return s;
}

}  // namespace

TEST_CASE("von_neumann_entropy closed forms") {
  ComplexVector v = ComplexVector::Zero(4);
  v[2] = 1.0;
  REQUIRE(von_neumann_entropy(PureStateVector(v).to_density_matrix()) == Approx(0.0).margin(1e-12));

  DensityMatrix mixed(0.25 * ComplexMatrix::Identity(4, 4));
  REQUIRE(von_neumann_entropy(mixed) == Approx(2.0 * std::log(2.0)).margin(1e-12));

  REQUIRE(von_neumann_entropy(diagonal_density({0.7, 0.3})) == Approx(0.610864).margin(5e-7));
}

TEST_CASE("entropy_fourier exact-expectation mode tracks the exact entropy") {
  const LogSeries& series = shared_series_01();
  double est = entropy_fourier(diagonal_density({0.7, 0.3}), series, EntropyMode::FourierExact);
  REQUIRE(est == Approx(0.610864).margin(1e-3));

  DensityMatrix half(0.5 * ComplexMatrix::Identity(2, 2));
  REQUIRE(entropy_fourier(half, series, EntropyMode::FourierExact) ==
          Approx(std::log(2.0)).margin(1e-3));

  Rng rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    DensityMatrix rho = random_density_matrix(8, 0.1, rng);
    double exact = von_neumann_entropy(rho);
    FourierEntropyEstimate est2 =
        entropy_fourier_detailed(rho, series, EntropyMode::FourierExact);
    REQUIRE(est2.spectrum_in_domain);
    REQUIRE(std::abs(est2.value - exact) <= 1e-3);
  }
}

TEST_CASE("entropy_fourier flags spectra outside the certified domain") {
  const LogSeries& series = shared_series_01();
  FourierEntropyEstimate est = entropy_fourier_detailed(diagonal_density({0.99, 0.01}), series,
                                                        EntropyMode::FourierExact);
  REQUIRE_FALSE(est.spectrum_in_domain);
  REQUIRE(est.min_eigenvalue == Approx(0.01).margin(1e-12));
}

TEST_CASE("entropy_fourier rejects unusable configurations") {
  LogSeries bad = shared_series_01();
  bad.certificate.passed = false;
  REQUIRE_THROWS_AS(entropy_fourier(diagonal_density({0.5, 0.5}), bad, EntropyMode::FourierExact),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(entropy_fourier(diagonal_density({0.5, 0.5}), shared_series_01(),
                                    EntropyMode::Exact),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(entropy_fourier(diagonal_density({0.5, 0.5}), shared_series_01(),
                                    EntropyMode::FourierShots, 0),
                    std::invalid_argument);
}

TEST_CASE("entropy_fourier shots mode concentrates and is deterministic") {
  const LogSeries& series = shared_series_01();
  DensityMatrix rho = diagonal_density({0.6, 0.4});
  double exact = von_neumann_entropy(rho);
  const long long shots = 1000000;
  double est = entropy_fourier(rho, series, EntropyMode::FourierShots, shots, 41);
  double b_norm = series.series.b_norm();
  REQUIRE(std::abs(est - exact) <=
          series.eps + 3.0 * b_norm / std::sqrt(static_cast<double>(shots)));
  REQUIRE(est == entropy_fourier(rho, series, EntropyMode::FourierShots, shots, 41));
  REQUIRE(est != entropy_fourier(rho, series, EntropyMode::FourierShots, shots, 42));
}

TEST_CASE("average_energy closed forms and purified route") {
  PauliSum z(1, {{1.0, PauliString::parse("Z")}});
  DensityMatrix half(0.5 * ComplexMatrix::Identity(2, 2));
  REQUIRE(average_energy(half, z) == Approx(0.0).margin(1e-12));
  REQUIRE(average_energy(diagonal_density({1.0, 0.0}), z) == Approx(1.0).margin(1e-12));

  Rng rng(61);
  for (int rep = 0; rep < 20; ++rep) {
    PauliSum h = random_pauli_sum(3, 5, rng);
    if (h.empty()) continue;
    LCUDecomposition lcu = lcu_decompose(h);
    PureStateVector psi = random_pure_state(64, rng);
    DensityMatrix rho = partial_trace(psi, 8, 8, Subsystem::A);
    REQUIRE(average_energy_estimated(psi, lcu) ==
            Approx(average_energy(rho, h)).margin(1e-12));
  }
}

TEST_CASE("free_energy of exact Gibbs data on a diagonal Hamiltonian") {
  AdiabaticFamily fam(PauliSum(2, {{0.8, PauliString::parse("ZI")},
                                   {-0.55, PauliString::parse("IZ")}}),
                      PauliSum(2, std::vector<PauliTerm>{}));
  double beta = 1.7;
  PauliSum h = interpolate(fam, 1.0);
  ComplexMatrix hm = to_matrix(h);
  RealVector probs_full(4);
  double zsum = 0.0;
  for (Index i = 0; i < 4; ++i) zsum += std::exp(-beta * hm(i, i).real());
  for (Index i = 0; i < 4; ++i) probs_full[i] = std::exp(-beta * hm(i, i).real()) / zsum;

  AnsatzParameters p =
      params_of({0.3, -0.7}, {probs_full[0], probs_full[1], probs_full[2]});
  AnsatzConfig acfg(2, 2, 5.0);
  ObjectiveConfig ocfg;
  ocfg.beta = beta;
  double f = free_energy(p, fam, acfg, ocfg);
  REQUIRE(f == Approx(-log_partition(h, beta) / beta).margin(1e-9));
}

TEST_CASE("free_energy penalty vanishes on feasible parameters") {
  AdiabaticFamily fam = random_instance(2, 71);
  AnsatzConfig acfg(2, 1, 3.0);
  ObjectiveConfig ocfg;
  AnsatzParameters feasible = params_of({0.1}, {0.4, 0.3, 0.2});
  ObjectiveConfig heavy = ocfg;
  heavy.penalty_weight = 1e6;
  REQUIRE(free_energy(feasible, fam, acfg, ocfg) ==
          Approx(free_energy(feasible, fam, acfg, heavy)).margin(1e-12));

  AnsatzParameters infeasible = params_of({0.1}, {0.8, 0.8, 0.2});
  REQUIRE(free_energy(infeasible, fam, acfg, heavy) >
          free_energy(infeasible, fam, acfg, ocfg));
}

TEST_CASE("variational lower bound on random feasible parameters") {
  AdiabaticFamily fam = random_instance(3, 81);
  PauliSum h = interpolate(fam, 1.0);
  double beta = 1.0;
  double f_gibbs = -log_partition(h, beta) / beta;
  AnsatzConfig acfg(3, 3, 5.0);
  ObjectiveConfig ocfg;
  FreeEnergyObjective obj(fam, acfg, ocfg);
  Rng rng(82);
  for (int rep = 0; rep < 50; ++rep) {
    RealVector p(8);
    for (Index i = 0; i < 8; ++i) p[i] = -std::log(1.0 - rng.uniform());
    p /= p.sum();
    AnsatzParameters params;
    params.phi = RealVector(3);
    for (Index k = 0; k < 3; ++k) params.phi[k] = rng.uniform(-2.0, 2.0);
    params.probs = p.head(7);
    REQUIRE(obj.evaluate(params) >= f_gibbs - 1e-9);
  }
}

TEST_CASE("finite_diff_gradient on analytic functions") {
  auto constant = [](const RealVector&) { return 3.5; };
  RealVector x0 = RealVector::Zero(4);
  GradientEstimate g0 = finite_diff_gradient(constant, x0, 1e-5);
  REQUIRE(g0.g.norm() == 0.0);

  auto quadratic = [](const RealVector& x) { return x.squaredNorm(); };
  GradientEstimate g1 = finite_diff_gradient(quadratic, x0, 1e-4);
  for (Index i = 0; i < 4; ++i) REQUIRE(g1.g[i] == Approx(1e-4).margin(1e-12));

  auto bad = [](const RealVector& x) { return std::log(x[0]); };
  RealVector edge(1);
  edge << -1e-9;
  REQUIRE_THROWS_AS(finite_diff_gradient(bad, edge, 1e-4), std::runtime_error);
}

TEST_CASE("finite-difference Richardson consistency on the exact objective") {
  AdiabaticFamily fam = random_instance(2, 91);
  AnsatzConfig acfg(2, 2, 4.0);
  ObjectiveConfig ocfg;
  FreeEnergyObjective obj(fam, acfg, ocfg);
  auto fn = [&obj](const RealVector& x) { return obj(x); };
  RealVector x = obj.pack(params_of({0.4, -0.3}, {0.35, 0.3, 0.2}));

  auto diff_at = [&](double delta) {
    GradientEstimate a = finite_diff_gradient(fn, x, delta);
    GradientEstimate b = finite_diff_gradient(fn, x, 0.5 * delta);
    return (a.g - b.g).cwiseAbs().maxCoeff();
  };
  double d3 = diff_at(1e-3);
  double d4 = diff_at(1e-4);
  double c = d3 / 1e-3;
  REQUIRE(d4 <= 2.0 * c * 1e-4);
}

TEST_CASE("gradient_descent on a quadratic bowl contracts geometrically") {
  auto quadratic = [](const RealVector& x) { return x.squaredNorm(); };
  RealVector x0(3);
  x0 << 1.0, -2.0, 0.5;
  OptimizationTrace tr = gradient_descent(quadratic, x0, 0.25, 40, 1e-12, 1e-9);
  // x_{t+1} = x_t - 0.25 * 2 x_t = 0.5 x_t up to finite-difference bias
  REQUIRE(tr.best_f < 1e-10);
  REQUIRE(tr.best_x.norm() < 1e-5);
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    REQUIRE(tr.records[i].best_f <= tr.records[i - 1].best_f);
  }

  RealVector at_min = RealVector::Zero(3);
  OptimizationTrace still = gradient_descent(quadratic, at_min, 0.25, 20, 1e-6, 1e-9);
  REQUIRE(still.best_x.norm() < 1e-6);
}

TEST_CASE("gradient_descent halves the rate under divergence") {
  // eta * L slightly past the stability boundary: every step increases f
  // until the divergence guard halves the rate, after which it contracts.
  auto steep = [](const RealVector& x) { return 11.0 * x.squaredNorm(); };
  RealVector x0(2);
  x0 << 1.0, 1.0;
  OptimizationTrace tr = gradient_descent(steep, x0, 0.1, 100, 1e-12, 1e-7);
  REQUIRE(tr.rate_halvings > 0);
  REQUIRE(tr.best_f <= 22.0);
}

TEST_CASE("gradient_descent on a 2-qubit instance keeps the best trace non-increasing") {
  AdiabaticFamily fam = random_instance(2, 101);
  AnsatzConfig acfg(2, 2, 4.0);
  ObjectiveConfig ocfg;
  FreeEnergyObjective obj(fam, acfg, ocfg);
  auto fn = [&obj](const RealVector& x) { return obj(x); };
  RealVector x0 = obj.pack(params_of({0.2, 0.4}, {0.3, 0.3, 0.2}));
  OptimizationTrace tr = gradient_descent(fn, x0, 1e-2, 50, 1e-10, 1e-4, 10);
  REQUIRE(tr.records.size() >= 2);
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    REQUIRE(tr.records[i].best_f <= tr.records[i - 1].best_f);
  }
}

TEST_CASE("powell_minimize solves classic test functions") {
  auto quad1d = [](const RealVector& x) { return (x[0] - 2.0) * (x[0] - 2.0) + 1.0; };
  RealVector x0(1);
  x0 << -3.0;
  OptimizationTrace tr = powell_minimize(quad1d, x0, 1e-10, 100);
  REQUIRE(tr.evaluations < 100);
  REQUIRE(tr.best_x[0] == Approx(2.0).margin(1e-6));

  auto rosenbrock = [](const RealVector& x) {
    double a = 1.0 - x[0];
    double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  RealVector r0(2);
  r0 << -1.2, 1.0;
  OptimizationTrace rt = powell_minimize(rosenbrock, r0, 1e-12, 10000);
  REQUIRE(rt.best_f < 1e-4);
}

TEST_CASE("powell_minimize leaves flat coordinates alone") {
  auto partial = [](const RealVector& x) { return (x[0] - 1.0) * (x[0] - 1.0); };
  RealVector x0(2);
  x0 << 4.0, 0.7;
  OptimizationTrace tr = powell_minimize(partial, x0, 1e-12, 2000);
  REQUIRE(tr.best_x[0] == Approx(1.0).margin(1e-6));
  REQUIRE(tr.best_x[1] == Approx(0.7).margin(1e-6));
}

TEST_CASE("powell_minimize flags an exhausted budget") {
  auto slow = [](const RealVector& x) { return std::cos(x.sum()) + 0.01 * x.squaredNorm(); };
  RealVector x0 = RealVector::Constant(6, 2.0);
  OptimizationTrace tr = powell_minimize(slow, x0, 1e-15, 40);
  REQUIRE_FALSE(tr.complete);
  REQUIRE(tr.evaluations <= 40);
  REQUIRE(tr.records.back().evals == tr.evaluations);
  REQUIRE_THROWS_AS(powell_minimize(slow, x0, 1e-10, 5), std::invalid_argument);
}

TEST_CASE("run_experiment recovers a diagonal instance exactly from truth") {
  PauliSum h0(3, {{0.9, PauliString(3, {Pauli::Z, Pauli::I, Pauli::I})},
                  {-0.2, PauliString(3, {Pauli::I, Pauli::Z, Pauli::I})},
                  {0.5, PauliString(3, {Pauli::I, Pauli::I, Pauli::Z})}});
  PauliSum h1(3, std::vector<PauliTerm>{});
  AdiabaticFamily fam(h0, h1);
  AnsatzConfig acfg(3, 2, 5.0);
  ObjectiveConfig ocfg;
  InitSpec init;
  init.sigma = 0.0;
  OptimizerSpec opt;
  ExperimentResult res = run_experiment(fam, acfg, ocfg, init, opt, 64, 7, 1);
  REQUIRE(res.records.front().evals == 1);
  REQUIRE(res.records.front().delta_f <= 1e-9);
  REQUIRE(res.final_delta_f <= 1e-9);
  REQUIRE(res.final_trace_distance <= 1e-6);
}

TEST_CASE("run_experiment traces are deterministic and non-increasing") {
  AdiabaticFamily fam = random_instance(2, 111);
  AnsatzConfig acfg(2, 2, 4.0);
  ObjectiveConfig ocfg;
  InitSpec init;
  init.sigma = 0.1;
  OptimizerSpec opt;
  ExperimentResult a = run_experiment(fam, acfg, ocfg, init, opt, 400, 99);
  ExperimentResult b = run_experiment(fam, acfg, ocfg, init, opt, 400, 99);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    REQUIRE(a.records[i].evals == b.records[i].evals);
    REQUIRE(a.records[i].best_f == b.records[i].best_f);
    REQUIRE(a.records[i].trace_dist == b.records[i].trace_dist);
    if (i > 0) {
      REQUIRE(a.records[i].best_f <= a.records[i - 1].best_f);
      REQUIRE(a.records[i].delta_f <= a.records[i - 1].delta_f);
    }
  }
  ExperimentResult c = run_experiment(fam, acfg, ocfg, init, opt, 400, 100);
  REQUIRE(c.trace.best_f != a.trace.best_f);
}

TEST_CASE("run_experiment supports the shot-based estimator end to end") {
  AdiabaticFamily fam = random_instance(2, 121);
  AnsatzConfig acfg(2, 1, 3.0);
  ObjectiveConfig ocfg;
  ocfg.entropy_mode = EntropyMode::FourierShots;
  ocfg.p_min = 0.1;
  ocfg.series_eps = 1e-2;
  ocfg.shots_per_term = 2000;
  ocfg.base_seed = 5;
  InitSpec init;
  init.sigma = 0.05;
  OptimizerSpec opt;
  ExperimentResult a = run_experiment(fam, acfg, ocfg, init, opt, 150, 3);
  ExperimentResult b = run_experiment(fam, acfg, ocfg, init, opt, 150, 3);
  REQUIRE(a.trace.best_f == b.trace.best_f);
  REQUIRE(a.final_trace_distance == b.final_trace_distance);
}

TEST_CASE("random initialization stays feasible") {
  AdiabaticFamily fam = random_instance(2, 131);
  AnsatzConfig acfg(2, 2, 3.0);
  ObjectiveConfig ocfg;
  InitSpec init;
  init.kind = InitSpec::Kind::Random;
  OptimizerSpec opt;
  ExperimentResult res = run_experiment(fam, acfg, ocfg, init, opt, 100, 17);
  REQUIRE(res.records.front().best_f >= res.f_gibbs - 1e-9);
}
