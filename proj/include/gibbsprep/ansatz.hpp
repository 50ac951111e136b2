#pragma once

#include <cmath>
#include <utility>

#include "gibbsprep/hamiltonians.hpp"
#include "gibbsprep/numkernel.hpp"

namespace gibbsprep {

/// Trotterized adiabatic ansatz shape: r interior path points, total
/// evolution time T (fixed, not optimized), purification rank D = 2^n.
struct AnsatzConfig {
  int n = 1;
  int r = 0;
  double total_time = 1.0;
  int segment_substeps = 1;

  AnsatzConfig(int n_, int r_, double total_time_, int segment_substeps_ = 1)
      : n(n_), r(r_), total_time(total_time_), segment_substeps(segment_substeps_) {
    if (n < 1) throw std::invalid_argument("AnsatzConfig: n must be >= 1");
    if (r < 0) throw std::invalid_argument("AnsatzConfig: r must be >= 0");
    if (!(total_time > 0.0)) throw std::invalid_argument("AnsatzConfig: T must be positive");
    if (segment_substeps < 1) {
      throw std::invalid_argument("AnsatzConfig: segment_substeps must be >= 1");
    }
  }

  Index dim() const { return Index{1} << n; }
};

/// Free optimization variables: path variables phi_1..phi_r (the path
/// points are tanh(phi)) and purification probabilities p_1..p_{D-1}
/// (p_D follows by normalization). No feasibility is enforced here; the
/// projection below scores violations for the penalty.
struct AnsatzParameters {
  RealVector phi;
  RealVector probs;
};

/// Path points theta_0 = 0, theta_{r+1} = 1, interior theta_k = tanh(phi_k).
inline RealVector thetas_from_phis(const AnsatzParameters& params) {
  Index r = params.phi.size();
  RealVector theta(r + 2);
  theta[0] = 0.0;
  for (Index k = 0; k < r; ++k) theta[k + 1] = std::tanh(params.phi[k]);
  theta[r + 1] = 1.0;
  return theta;
}

/// Clamps each probability to [0, 1] and rescales proportionally if the
/// total exceeds 1. Returns the clamped parameters and the squared
/// distance moved, which feeds the free-energy penalty.
inline std::pair<AnsatzParameters, double> feasibility_projection(const AnsatzParameters& params) {
  AnsatzParameters out{params.phi, params.probs};
  double sum = 0.0;
  for (Index j = 0; j < out.probs.size(); ++j) {
    out.probs[j] = std::clamp(out.probs[j], 0.0, 1.0);
    sum += out.probs[j];
  }
  if (sum > 1.0) out.probs *= 1.0 / sum;
  double violation = (out.probs - params.probs).squaredNorm();
  return {std::move(out), violation};
}

/// Purification sum_j sqrt(p_j) |j>|j> on dim D^2 (system register first).
inline PureStateVector initial_purification(const AnsatzParameters& params, Index d) {
  if (params.probs.size() != d - 1) {
    throw std::invalid_argument("initial_purification: expected D-1 probabilities");
  }
  RealVector p(d);
  double sum = 0.0;
  for (Index j = 0; j < d - 1; ++j) {
    double v = params.probs[j];
    if (v < -1e-12) {
      throw std::invalid_argument("initial_purification: infeasible parameters (p_j < 0)");
    }
    p[j] = std::max(0.0, v);
    sum += p[j];
  }
  if (sum > 1.0 + 1e-12) {
    throw std::invalid_argument("initial_purification: infeasible parameters (sum p_j > 1)");
  }
  p[d - 1] = std::max(0.0, 1.0 - sum);
  ComplexVector amps = ComplexVector::Zero(d * d);
  for (Index j = 0; j < d; ++j) amps[j * d + j] = std::sqrt(p[j]);
  amps /= amps.norm();
  return PureStateVector(std::move(amps));
}

/// Applies the Trotterized adiabatic path to the purification: for each
/// segment k = 0..r, U_k = exp(-i H'((theta_k + theta_{k+1})/2)
/// (theta_{k+1} - theta_k) T) acts on the system register. With
/// segment_substeps > 1 each U_k becomes the first-order H0/H1 split
/// raised to that power.
inline PureStateVector evolve(const AnsatzParameters& params, const AdiabaticFamily& family,
                              const AnsatzConfig& config) {
  if (family.n() != config.n) {
    throw std::invalid_argument("evolve: family/config qubit count mismatch");
  }
  Index d = config.dim();
  PureStateVector psi0 = initial_purification(params, d);

  ComplexMatrix h0 = to_matrix(family.h0);
  ComplexMatrix h1 = to_matrix(family.h1);
  RealVector theta = thetas_from_phis(params);

  using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajorMatrix state =
      Eigen::Map<const RowMajorMatrix>(psi0.amplitudes().data(), d, d);

  for (Index k = 0; k + 1 < theta.size(); ++k) {
    double mid = 0.5 * (theta[k] + theta[k + 1]);
    double dt = (theta[k + 1] - theta[k]) * config.total_time;
    ComplexMatrix u;
    if (config.segment_substeps == 1) {
      u = matrix_function(h0 + mid * h1,
                          [dt](double lam) { return std::exp(Complex(0.0, -lam * dt)); });
    } else {
      double step = dt / config.segment_substeps;
      ComplexMatrix u0 = matrix_function(
          h0, [step](double lam) { return std::exp(Complex(0.0, -lam * step)); });
      ComplexMatrix u1 = matrix_function(
          h1, [step, mid](double lam) { return std::exp(Complex(0.0, -lam * mid * step)); });
      ComplexMatrix split = u0 * u1;
      u = ComplexMatrix::Identity(d, d);
      for (int s = 0; s < config.segment_substeps; ++s) u = split * u;
    }
    state = u * state;
  }

  ComplexVector amps = Eigen::Map<const ComplexVector>(state.data(), d * d);
  amps /= amps.norm();
  return PureStateVector(std::move(amps));
}

/// Partial trace over the ancilla register; the reduced state's spectrum
/// equals {p_j} because the evolution is unitary on the system register.
inline DensityMatrix reduced_state(const PureStateVector& psi, Index d) {
  if (psi.dim() != d * d) {
    throw std::invalid_argument("reduced_state: state dimension is not D^2");
  }
  return partial_trace(psi, d, d, Subsystem::A);
}

}  // namespace gibbsprep
