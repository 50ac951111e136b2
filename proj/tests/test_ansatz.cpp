#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "test_helpers.hpp"

using namespace gibbsprep;
using namespace gptest;
using Catch::Approx;

namespace {

AnsatzParameters make_params(std::initializer_list<double> phi, std::initializer_list<double> probs) {
  AnsatzParameters p;
  p.phi = RealVector(static_cast<Index>(phi.size()));
  Index i = 0;
  for (double v : phi) p.phi[i++] = v;
  p.probs = RealVector(static_cast<Index>(probs.size()));
  i = 0;
  for (double v : probs) p.probs[i++] = v;
  return p;
}

}  // namespace

TEST_CASE("thetas_from_phis pins the endpoints") {
  AnsatzParameters empty = make_params({}, {0.5});
  RealVector t0 = thetas_from_phis(empty);
  REQUIRE(t0.size() == 2);
  REQUIRE(t0[0] == 0.0);
  REQUIRE(t0[1] == 1.0);

  RealVector t1 = thetas_from_phis(make_params({0.0}, {0.5}));
  REQUIRE(t1.size() == 3);
  REQUIRE(t1[1] == Approx(0.0).margin(1e-15));

  RealVector t2 = thetas_from_phis(make_params({10.0}, {0.5}));
  REQUIRE(t2[1] == Approx(1.0).margin(1e-7));
  REQUIRE(t2[1] < 1.0);
}

TEST_CASE("initial_purification encodes the probabilities on the diagonal pairs") {
  PureStateVector psi = initial_purification(make_params({}, {1.0}), 2);
  REQUIRE(std::abs(psi.amplitudes()[0] - Complex(1.0, 0.0)) < 1e-12);
  REQUIRE(psi.amplitudes().tail(3).norm() < 1e-12);

  PureStateVector bell = initial_purification(make_params({}, {0.5}), 2);
  REQUIRE(std::abs(bell.amplitudes()[0] - Complex(1 / std::sqrt(2.0), 0)) < 1e-12);
  REQUIRE(std::abs(bell.amplitudes()[3] - Complex(1 / std::sqrt(2.0), 0)) < 1e-12);

  AnsatzParameters p = make_params({}, {0.4, 0.35, 0.05});
  PureStateVector psi4 = initial_purification(p, 4);
  DensityMatrix sys = partial_trace(psi4, 4, 4, Subsystem::A);
  DensityMatrix anc = partial_trace(psi4, 4, 4, Subsystem::B);
  RealVector expect(4);
  expect << 0.4, 0.35, 0.05, 0.2;
  for (Index j = 0; j < 4; ++j) {
    REQUIRE(sys.matrix()(j, j).real() == Approx(expect[j]).margin(1e-12));
    REQUIRE(anc.matrix()(j, j).real() == Approx(expect[j]).margin(1e-12));
  }
}

TEST_CASE("initial_purification rejects infeasible parameters") {
  REQUIRE_THROWS_AS(initial_purification(make_params({}, {-0.1}), 2), std::invalid_argument);
  REQUIRE_THROWS_AS(initial_purification(make_params({}, {0.8, 0.4, 0.0}), 4),
                    std::invalid_argument);
}

TEST_CASE("feasibility_projection clamps and scores") {
  auto [ok, v0] = feasibility_projection(make_params({}, {0.3, 0.2}));
  REQUIRE(v0 == 0.0);
  REQUIRE(ok.probs[0] == Approx(0.3));

  auto [clamped, v1] = feasibility_projection(make_params({}, {1.2}));
  REQUIRE(clamped.probs[0] == Approx(1.0));
  REQUIRE(v1 == Approx(0.04).margin(1e-14));

  auto [scaled, v2] = feasibility_projection(make_params({}, {0.7, 0.7}));
  REQUIRE(scaled.probs.sum() <= 1.0 + 1e-14);
  REQUIRE(scaled.probs[0] == Approx(0.5));
  REQUIRE(v2 == Approx(2.0 * 0.04).margin(1e-14));
  REQUIRE(v2 > 0.0);

  auto [neg, v3] = feasibility_projection(make_params({}, {-0.3, 0.5}));
  REQUIRE(neg.probs[0] == 0.0);
  REQUIRE(v3 == Approx(0.09).margin(1e-14));
}

TEST_CASE("evolve with T -> 0 returns the purification") {
  AdiabaticFamily fam = random_instance(2, 5);
  AnsatzConfig cfg(2, 2, 1e-300);
  AnsatzParameters p = make_params({0.2, -0.1}, {0.5, 0.2, 0.1});
  PureStateVector evolved = evolve(p, fam, cfg);
  PureStateVector initial = initial_purification(p, 4);
  REQUIRE((evolved.amplitudes() - initial.amplitudes()).norm() < 1e-10);
}

TEST_CASE("evolve with r = 0 is a single midpoint segment") {
  AdiabaticFamily fam = random_instance(2, 6);
  AnsatzConfig cfg(2, 0, 2.5);
  AnsatzParameters p = make_params({}, {0.6, 0.2, 0.1});
  PureStateVector evolved = evolve(p, fam, cfg);

  ComplexMatrix hmid = to_matrix(interpolate(fam, 0.5));
  ComplexMatrix u =
      matrix_function(hmid, [&](double lam) { return std::exp(Complex(0, -lam * 2.5)); });
  ComplexVector expect = kron(u, ComplexMatrix::Identity(4, 4)) *
                         initial_purification(p, 4).amplitudes();
  REQUIRE((evolved.amplitudes() - expect).norm() < 1e-10);
}

TEST_CASE("diagonal family leaves the reduced state diagonal") {
  // H1 = 0: the segment unitaries are diagonal, so the partial trace kills
  // every phase and the reduced state is exactly diag(p).
  PauliSum h0(2, {{0.9, PauliString::parse("ZI")}, {-0.4, PauliString::parse("IZ")}});
  PauliSum h1(2, std::vector<PauliTerm>{});
  AdiabaticFamily fam(h0, h1);
  AnsatzConfig cfg(2, 3, 4.0);
  Rng rng(77);
  for (int rep = 0; rep < 5; ++rep) {
    AnsatzParameters p = make_params({rng.normal(), rng.normal(), rng.normal()},
                                     {0.4, 0.3, 0.2});
    DensityMatrix rho = reduced_state(evolve(p, fam, cfg), 4);
    RealVector expect(4);
    expect << 0.4, 0.3, 0.2, 0.1;
    for (Index i = 0; i < 4; ++i) {
      for (Index j = 0; j < 4; ++j) {
        Complex want = i == j ? Complex(expect[i], 0) : Complex(0, 0);
        REQUIRE(std::abs(rho.matrix()(i, j) - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("evolution preserves the spectrum, norm, and purity") {
  AdiabaticFamily fam = random_instance(3, 17);
  AnsatzConfig cfg(3, 4, 5.0);
  Rng rng(18);
  RealVector probs_base(7);
  probs_base << 0.3, 0.2, 0.15, 0.1, 0.1, 0.05, 0.05;
  for (int rep = 0; rep < 10; ++rep) {
    AnsatzParameters p;
    p.phi = RealVector(4);
    for (Index k = 0; k < 4; ++k) p.phi[k] = rng.normal();
    p.probs = probs_base;
    PureStateVector psi = evolve(p, fam, cfg);
    REQUIRE(psi.amplitudes().norm() == Approx(1.0).margin(1e-10));
    DensityMatrix rho = reduced_state(psi, 8);
    RealVector evals = rho.eigenvalues();
    RealVector expect(8);
    expect << 0.3, 0.2, 0.15, 0.1, 0.1, 0.05, 0.05, 0.05;
    std::sort(expect.data(), expect.data() + 8);
    for (Index i = 0; i < 8; ++i) REQUIRE(evals[i] == Approx(expect[i]).margin(1e-10));
    double purity = (rho.matrix() * rho.matrix()).trace().real();
    REQUIRE(purity == Approx(expect.squaredNorm()).margin(1e-10));
  }
}

TEST_CASE("segment increments telescope to one") {
  Rng rng(19);
  for (int rep = 0; rep < 20; ++rep) {
    AnsatzParameters p;
    p.phi = RealVector(5);
    for (Index k = 0; k < 5; ++k) p.phi[k] = rng.uniform(-3.0, 3.0);
    p.probs = RealVector::Zero(7);
    RealVector theta = thetas_from_phis(p);
    double total = 0.0;
    for (Index k = 0; k + 1 < theta.size(); ++k) total += theta[k + 1] - theta[k];
    REQUIRE(total == Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("substeps agree with the exact segment for commuting parts") {
  PauliSum h0(2, {{0.8, PauliString::parse("ZI")}});
  PauliSum h1(2, {{-0.6, PauliString::parse("ZZ")}});  // commutes with h0
  AdiabaticFamily fam(h0, h1);
  AnsatzParameters p = make_params({0.4, -0.2}, {0.5, 0.3, 0.1});
  AnsatzConfig exact(2, 2, 3.0, 1);
  AnsatzConfig split(2, 2, 3.0, 10);
  PureStateVector a = evolve(p, fam, exact);
  PureStateVector b = evolve(p, fam, split);
  REQUIRE((a.amplitudes() - b.amplitudes()).norm() < 1e-10);
}

TEST_CASE("substeps converge to the exact segment as the count grows") {
  AdiabaticFamily fam = random_instance(2, 33);
  AnsatzParameters p = make_params({0.3}, {0.5, 0.2, 0.2});
  AnsatzConfig exact(2, 1, 2.0, 1);
  PureStateVector ref = evolve(p, fam, exact);
  std::vector<double> errs;
  for (int sub : {4, 16, 64}) {
    AnsatzConfig cfg(2, 1, 2.0, sub);
    errs.push_back((evolve(p, fam, cfg).amplitudes() - ref.amplitudes()).norm());
  }
  // first-order splitting: error shrinks at least linearly in the substeps
  REQUIRE(errs[1] < errs[0] / 2.0);
  REQUIRE(errs[2] < errs[1] / 2.0);
  REQUIRE(errs[2] < 2e-2);
}

TEST_CASE("reduced_state checks the dimension") {
  Rng rng(20);
  REQUIRE_THROWS_AS(reduced_state(random_pure_state(8, rng), 4), std::invalid_argument);
}
