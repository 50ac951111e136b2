#pragma once

#include <cmath>
#include <map>
#include <string>

#include "gibbsprep/fourierlog.hpp"
#include "gibbsprep/hamiltonians.hpp"
#include "gibbsprep/numkernel.hpp"
#include "gibbsprep/random.hpp"

namespace gibbsprep {

enum class TrigKind { Cos, Sin };

/// Tr(rho cos(rho t)) or Tr(rho sin(rho t)), evaluated on the spectrum of
/// rho: sum_j p_j cos(p_j t). This is the exact expectation produced by the
/// phase-estimation circuit with density-matrix exponentiation.
inline double fourier_term_expectation(const DensityMatrix& rho, double t, TrigKind kind) {
  const RealVector& p = rho.eigenvalues();
  double acc = 0.0;
  for (Index j = 0; j < p.size(); ++j) {
    acc += kind == TrigKind::Cos ? p[j] * std::cos(p[j] * t) : p[j] * std::sin(p[j] * t);
  }
  return acc;
}

/// Pr(+ | phase) = (1 + Tr(rho cos(rho t + phase))) / 2. The phase enters
/// once; phase = 0 gives the cosine term and phase = -pi/2 the sine term.
inline double fourier_term_probability(const DensityMatrix& rho, double t, double phase) {
  const RealVector& p = rho.eigenvalues();
  double acc = 0.0;
  for (Index j = 0; j < p.size(); ++j) acc += p[j] * std::cos(p[j] * t + phase);
  return 0.5 * (1.0 + acc);
}

/// Pr(+1) = (1 + <psi|H|psi> / ||alpha||_1) / 2 for the LCU Hadamard-test
/// circuit; the unitaries' statistics are evaluated directly.
inline double energy_probability(const PureStateVector& psi, const LCUDecomposition& lcu) {
  if (lcu.unitaries.empty() || psi.dim() != lcu.unitaries.front().rows()) {
    throw std::invalid_argument("energy_probability: state/unitary dimension mismatch");
  }
  const ComplexVector& v = psi.amplitudes();
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k < lcu.alphas.size(); ++k) {
    acc += lcu.alphas[k] * (v.adjoint() * (lcu.unitaries[k] * v))(0, 0);
  }
  return 0.5 * (1.0 + acc.real() / lcu.alpha_norm);
}

/// Same circuit with |psi> a purification on dim D^2 and the unitaries
/// acting on the system register only; <psi|(V x I)|psi> is evaluated by
/// reshaping, without materializing D^2 x D^2 operators.
inline double energy_probability_purified(const PureStateVector& psi,
                                          const LCUDecomposition& lcu) {
  if (lcu.unitaries.empty()) {
    throw std::invalid_argument("energy_probability_purified: empty decomposition");
  }
  Index d = lcu.unitaries.front().rows();
  if (psi.dim() != d * d) {
    throw std::invalid_argument("energy_probability_purified: state is not on dim D^2");
  }
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap m(psi.amplitudes().data(), d, d);
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k < lcu.alphas.size(); ++k) {
    acc += lcu.alphas[k] * (m.adjoint() * (lcu.unitaries[k] * m)).trace();
  }
  return 0.5 * (1.0 + acc.real() / lcu.alpha_norm);
}

/// Outcome of a finite-shot run: estimate = 2 (plus_count / shots) - 1
/// estimates 2 Pr(+) - 1.
struct ShotResult {
  long long shots = 0;
  long long plus_count = 0;
  double estimate = 0.0;
};

inline ShotResult sample_bernoulli(double p, long long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_bernoulli: shots must be >= 1");
  if (p < -1e-9 || p > 1.0 + 1e-9) {
    throw std::invalid_argument("sample_bernoulli: probability outside [0, 1]");
  }
  p = std::clamp(p, 0.0, 1.0);
  Rng rng(seed);
  ShotResult r;
  r.shots = shots;
  r.plus_count = rng.binomial(shots, p);
  r.estimate = 2.0 * static_cast<double>(r.plus_count) / static_cast<double>(shots) - 1.0;
  return r;
}

/// Oracle-query account for an estimation routine; query_count is exactly
/// reproducible from formula_terms.
struct QueryCostReport {
  std::string oracle_name;
  double eps = 0.0;
  long long query_count = 0;
  std::map<std::string, double> formula_terms;
};

/// ceil(pi / eps): the amplitude-estimation query count at precision eps
/// (the constant pi is a modeling choice for the O(1/eps) bound).
inline long long amplitude_estimation_cost(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("amplitude_estimation_cost: eps must be positive");
  return std::max<long long>(1, static_cast<long long>(std::ceil(M_PI / eps)));
}

namespace detail {
inline QueryCostReport entropy_cost_from_series(const RealFourierSeries& series, double eps) {
  double b_norm = series.b_norm();
  double sum_t = 0.0;
  for (double tm : series.t) sum_t += tm;
  double m = static_cast<double>(series.M);
  double sum_log_inv_eps = m * std::log(1.0 / eps);
  double sum_log_b_norm = m * std::log(b_norm);
  QueryCostReport r;
  r.oracle_name = "purified-state preparation U_rho";
  r.eps = eps;
  r.formula_terms = {{"M", m},
                     {"b_norm", b_norm},
                     {"sum_t", sum_t},
                     {"sum_log_inv_eps", sum_log_inv_eps},
                     {"sum_log_b_norm", sum_log_b_norm}};
  double total = (b_norm / eps) * (sum_t + sum_log_inv_eps + sum_log_b_norm);
  r.query_count = std::max<long long>(1, static_cast<long long>(std::ceil(total)));
  return r;
}
}  // namespace detail

/// Entropy-estimation cost: ceil((||b||_1/eps) sum_m (t_m + ln(1/eps)
/// + ln ||b||_1)) with the concrete M, ||b||_1, t_m of the series built for
/// (p_min, eps). Accounting only: a failed accuracy certificate does not
/// prevent the report.
inline QueryCostReport entropy_estimation_cost(double p_min, double eps) {
  RealFourierSeries series;
  try {
    series = build_log_series(p_min, eps).series;
  } catch (const CertificateError& e) {
    if (!e.result) throw;
    series = e.result->series;
  }
  return detail::entropy_cost_from_series(series, eps);
}

inline QueryCostReport entropy_estimation_cost(const LogSeries& log_series) {
  return detail::entropy_cost_from_series(log_series.series, log_series.eps);
}

/// Energy-estimation cost: amplitude estimation at precision eps/||alpha||_1.
inline QueryCostReport energy_estimation_cost(double alpha_norm, double eps) {
  if (!(alpha_norm > 0.0)) {
    throw std::invalid_argument("energy_estimation_cost: alpha_norm must be positive");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("energy_estimation_cost: eps must be positive");
  QueryCostReport r;
  r.oracle_name = "LCU oracles U_P, U_S and state preparation U_psi";
  r.eps = eps;
  r.formula_terms = {{"alpha_norm", alpha_norm}, {"amplitude_eps", eps / alpha_norm}};
  r.query_count = amplitude_estimation_cost(eps / alpha_norm);
  return r;
}

}  // namespace gibbsprep
