#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gibbsprep/common.hpp"
#include "gibbsprep/parallel.hpp"

namespace gibbsprep {

/// Truncated power series sum_{k=0}^{K} a_k x^k with a_0 kept separate;
/// for the logarithm a_k = -1/k in the variable x = 1 - p.
struct TaylorSeries {
  int K = 0;
  std::vector<double> a;  // a_1 .. a_K
  double a0 = 0.0;

  double l1_norm() const {
    double s = std::abs(a0);
    for (double v : a) s += std::abs(v);
    return s;
  }

  double evaluate(double x) const {
    double acc = 0.0;
    for (int k = K; k >= 1; --k) acc = (acc + a[static_cast<std::size_t>(k) - 1]) * x;
    return acc + a0;
  }
};

/// sum_{m=-M}^{M} c_m e^{i pi m x / 2}; c stored with offset M.
struct ComplexFourierSeries {
  int M = 0;
  std::vector<Complex> c;  // size 2M+1, index m + M

  Complex coeff(int m) const { return c[static_cast<std::size_t>(m + M)]; }

  double l1_norm() const {
    double s = 0.0;
    for (const Complex& v : c) s += std::abs(v);
    return s;
  }

  double evaluate_real(double x) const {
    // Real part of the sum; evaluated with a phase recurrence.
    Complex z = std::exp(Complex(0.0, 0.5 * M_PI * x));
    Complex zm(1.0, 0.0);
    Complex acc = coeff(0);
    for (int m = 1; m <= M; ++m) {
      zm *= z;
      acc += coeff(m) * zm + coeff(-m) * std::conj(zm);
    }
    return acc.real();
  }
};

/// constant + sum_m b1_m cos(t_m p) + b2_m sin(t_m p) with t_m = pi m / 2.
struct RealFourierSeries {
  int M = 0;
  double constant = 0.0;
  std::vector<double> b1, b2, t;

  double b_norm() const {
    double s = 0.0;
    for (int m = 0; m < M; ++m) s += std::abs(b1[m]) + std::abs(b2[m]);
    return s;
  }

  double evaluate(double p) const {
    double acc = constant;
    for (int m = 0; m < M; ++m) acc += b1[m] * std::cos(t[m] * p) + b2[m] * std::sin(t[m] * p);
    return acc;
  }
};

struct ErrorCertificate {
  long grid_size = 0;
  double max_error = 0.0;
  double target_eps = 0.0;
  bool passed = false;
};

/// A log-series build: the approximation target interval is [p_min, 1] and
/// the certificate records the grid check of |ln p - series(p)| <= eps.
struct LogSeries {
  double p_min = 0.0;
  double eps = 0.0;
  RealFourierSeries series;
  ErrorCertificate certificate;
};

class CertificateError : public std::runtime_error {
 public:
  CertificateError(std::string msg, ErrorCertificate cert, std::optional<LogSeries> result = {})
      : std::runtime_error(std::move(msg)),
        certificate(cert),
        result(std::move(result)) {}

  ErrorCertificate certificate;
  std::optional<LogSeries> result;
};

/// Grid maximum of |target - series| over grid_size uniform points on
/// [lo, hi] (endpoints included; a single-point grid evaluates lo).
template <typename SeriesFn, typename TargetFn>
ErrorCertificate verify_error_fn(SeriesFn&& series, TargetFn&& target, double lo, double hi,
                                 long grid_size, double eps) {
  if (grid_size < 1) throw std::invalid_argument("verify_error: grid_size must be >= 1");
  if (!(lo <= hi)) throw std::invalid_argument("verify_error: empty interval");
  std::vector<double> errs(static_cast<std::size_t>(grid_size));
  parallel_for(grid_size, [&](long i) {
    double x = grid_size == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (grid_size - 1);
    double tv = target(x);
    if (!std::isfinite(tv)) {
      errs[static_cast<std::size_t>(i)] = std::numeric_limits<double>::infinity();
      return;
    }
    errs[static_cast<std::size_t>(i)] = std::abs(tv - series(x));
  });
  double max_err = 0.0;
  for (double e : errs) {
    if (!std::isfinite(e)) {
      throw std::domain_error("verify_error: target function not finite on the interval");
    }
    max_err = std::max(max_err, e);
  }
  return ErrorCertificate{grid_size, max_err, eps, max_err <= eps};
}

inline ErrorCertificate verify_error(const RealFourierSeries& series,
                                     const std::function<double(double)>& target, double lo,
                                     double hi, long grid_size, double eps) {
  return verify_error_fn([&](double p) { return series.evaluate(p); }, target, lo, hi, grid_size,
                         eps);
}

/// Smallest K with (1 - p_min)^K / (K + 1) <= eps / 4.
inline int choose_taylor_truncation(double p_min, double eps) {
  if (!(p_min > 0.0) || p_min > 1.0) {
    throw std::invalid_argument("choose_taylor_truncation: p_min must lie in (0, 1]");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("choose_taylor_truncation: eps must be positive");
  double x = 1.0 - p_min;
  double bound = eps / 4.0;
  double pw = x;  // x^K
  for (int K = 1; K <= 2000000; ++K) {
    if (pw / (K + 1) <= bound) return K;
    pw *= x;
  }
  throw std::invalid_argument("choose_taylor_truncation: required degree exceeds supported range");
}

/// a_k = -1/k, so the series itself approximates ln p in x = 1 - p.
inline TaylorSeries taylor_log(int K) {
  if (K < 1) throw std::invalid_argument("taylor_log: K must be >= 1");
  TaylorSeries ts;
  ts.K = K;
  ts.a.resize(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) ts.a[static_cast<std::size_t>(k) - 1] = -1.0 / k;
  return ts;
}

namespace detail {

/// Exact truncation tail of the log series at p = p_min:
/// sum_{k>K} (1-p_min)^k / k.
inline double taylor_log_tail(double p_min, int K) {
  double x = 1.0 - p_min;
  double partial = 0.0, pw = 1.0;
  for (int k = 1; k <= K; ++k) {
    pw *= x;
    partial += pw / k;
  }
  return -std::log(p_min) - partial;
}

/// Smallest K whose exact tail meets the eps/4 truncation budget. The
/// closed-form bound of choose_taylor_truncation undercounts the tail by
/// roughly a 1/p_min factor, so the series builder searches on the exact
/// remainder instead.
inline int pick_build_truncation(double p_min, double eps) {
  double x = 1.0 - p_min;
  double lnp = -std::log(p_min);
  double budget = eps / 4.0;
  double partial = 0.0, pw = 1.0;
  for (int K = 1; K <= 2000000; ++K) {
    pw *= x;
    partial += pw / K;
    if (lnp - partial <= budget) return K;
  }
  throw std::invalid_argument("build_log_series: required degree exceeds supported range");
}

inline int fourier_degree(double a_norm, double eps, double delta) {
  double eps_c = std::min(eps, 4.0 * a_norm);
  double raw = std::log(4.0 * a_norm / eps_c) / delta;
  long m = 2 * static_cast<long>(std::ceil(raw - 1e-12));
  return static_cast<int>(std::max(0L, m));
}

/// Cosine/sine expansion of the fit on the symmetric x interval:
/// f(x) = cc_0 + sum_m cc_m cos(pi m x/2) + cs_m sin(pi m x/2).
struct XBasisFit {
  int M = 0;
  RealVector cc;  // size M+1
  RealVector cs;  // size M
};

inline double group_l1(const RealVector& cc, const RealVector& cs) {
  double s = std::abs(cc[0]);
  for (Index m = 1; m < cc.size(); ++m) s += std::hypot(cc[m], cs[m - 1]);
  return s;
}

/// Euclidean projection onto the ball {sum_m ||(cc_m, cs_m)||_2 <= radius};
/// per-group soft threshold with the threshold solved by sorting.
inline void project_group_l1(RealVector& cc, RealVector& cs, double radius) {
  Index groups = cc.size();
  std::vector<double> norms(static_cast<std::size_t>(groups));
  norms[0] = std::abs(cc[0]);
  for (Index m = 1; m < groups; ++m) norms[static_cast<std::size_t>(m)] = std::hypot(cc[m], cs[m - 1]);
  double total = std::accumulate(norms.begin(), norms.end(), 0.0);
  if (total <= radius) return;
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double tau = 0.0, csum = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    csum += sorted[k];
    double cand = (csum - radius) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || cand >= sorted[k + 1]) {
      tau = cand;
      break;
    }
  }
  auto shrink = [tau](double n) { return n > tau ? (n - tau) / n : 0.0; };
  cc[0] *= shrink(norms[0]);
  for (Index m = 1; m < groups; ++m) {
    double f = shrink(norms[static_cast<std::size_t>(m)]);
    cc[m] *= f;
    cs[m - 1] *= f;
  }
}

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr double kGL7Nodes[7] = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
inline constexpr double kGL7Weights[7] = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

/// Least-squares fit of the truncated Taylor polynomial onto the
/// half-integer Fourier basis on [-(1-delta), 1-delta], with the complex
/// coefficient 1-norm capped at ||a||_1. The cap is enforced exactly by
/// projection; accuracy is judged afterwards by the caller's certificate.
inline XBasisFit fit_fourier(const TaylorSeries& ts, double delta, double eps) {
  double a_norm = ts.l1_norm();
  int M = fourier_degree(a_norm, eps, delta);
  double w = 1.0 - delta;

  XBasisFit fit;
  fit.M = M;
  fit.cc = RealVector::Zero(M + 1);
  fit.cs = RealVector::Zero(std::max(0, M));
  if (w <= 1e-12) {
    fit.cc[0] = ts.evaluate(0.0);
    return fit;
  }

  // Gram blocks over [-w, w]; cos x sin cross terms vanish by parity.
  auto S = [w](double q) { return std::abs(q) > 1e-14 ? 2.0 * std::sin(q * w) / q : 2.0 * w; };
  auto q_of = [](int m) { return 0.5 * M_PI * m; };
  RealMatrix gc(M + 1, M + 1), gs(std::max(0, M), std::max(0, M));
  for (int i = 0; i <= M; ++i)
    for (int j = 0; j <= M; ++j)
      gc(i, j) = 0.5 * (S(q_of(i - j)) + S(q_of(i + j)));
  for (int i = 1; i <= M; ++i)
    for (int j = 1; j <= M; ++j)
      gs(i - 1, j - 1) = 0.5 * (S(q_of(i - j)) - S(q_of(i + j)));

  // Right-hand sides int poly(x) cos(q_m x) dx via composite Gauss-Legendre.
  RealVector bc = RealVector::Zero(M + 1), bs = RealVector::Zero(std::max(0, M));
  {
    int nseg = static_cast<int>(std::ceil(q_of(M) * w / 1.5)) + ts.K + 32;
    double h = 2.0 * w / nseg;
    for (int s = 0; s < nseg; ++s) {
      double mid = -w + (s + 0.5) * h;
      for (int g = 0; g < 7; ++g) {
        double x = mid + 0.5 * h * kGL7Nodes[g];
        double wt = 0.5 * h * kGL7Weights[g] * ts.evaluate(x);
        Complex z = std::exp(Complex(0.0, 0.5 * M_PI * x));
        Complex zm(1.0, 0.0);
        bc[0] += wt;
        for (int m = 1; m <= M; ++m) {
          zm *= z;
          bc[m] += wt * zm.real();
          bs[m - 1] += wt * zm.imag();
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> eig_c(gc);
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig_s(
      M > 0 ? gs : RealMatrix::Identity(1, 1));
  const RealVector bct = eig_c.eigenvectors().transpose() * bc;
  const RealVector bst = M > 0 ? (eig_s.eigenvectors().transpose() * bs).eval() : RealVector();

  auto ridge = [&](double lam, RealVector& cc, RealVector& cs) {
    cc = eig_c.eigenvectors() *
         (bct.array() / (eig_c.eigenvalues().array() + lam)).matrix();
    if (M > 0)
      cs = eig_s.eigenvectors() *
           (bst.array() / (eig_s.eigenvalues().array() + lam)).matrix();
  };

  // Selection grid (coarse; the binding check is the caller's certificate).
  const int ngrid = 2001;
  RealMatrix bas_c(ngrid, M + 1), bas_s(ngrid, std::max(1, M));
  RealVector target(ngrid);
  for (int i = 0; i < ngrid; ++i) {
    double x = -w + 2.0 * w * i / (ngrid - 1);
    target[i] = ts.evaluate(x);
    Complex z = std::exp(Complex(0.0, 0.5 * M_PI * x));
    Complex zm(1.0, 0.0);
    bas_c(i, 0) = 1.0;
    for (int m = 1; m <= M; ++m) {
      zm *= z;
      bas_c(i, m) = zm.real();
      bas_s(i, m - 1) = zm.imag();
    }
  }
  auto sup_err = [&](const RealVector& cc, const RealVector& cs) {
    RealVector v = bas_c * cc;
    if (M > 0) v += bas_s * cs;
    return (v - target).cwiseAbs().maxCoeff();
  };

  const double radius = a_norm * (1.0 - 1e-12);
  RealVector cc, cs;
  bool have_feasible = false;
  double best_err = std::numeric_limits<double>::infinity();
  RealVector best_cc, best_cs;
  RealVector seed_cc, seed_cs;
  for (double lam = 1e-14; lam <= 1.1e-5; lam *= 10.0) {
    ridge(lam, cc, cs);
    seed_cc = cc;
    seed_cs = cs;
    if (group_l1(cc, cs) <= radius) {
      double e = sup_err(cc, cs);
      if (e < best_err) {
        best_err = e;
        best_cc = cc;
        best_cs = cs;
        have_feasible = true;
      }
    }
  }
  if (have_feasible && best_err <= 0.25 * eps) {
    fit.cc = best_cc;
    fit.cs = best_cs;
    return fit;
  }

  // Accelerated projected gradient on the coefficient-norm ball.
  if (!have_feasible) {
    ridge(1e-10, seed_cc, seed_cs);
    project_group_l1(seed_cc, seed_cs, radius);
    best_cc = seed_cc;
    best_cs = seed_cs;
  }
  RealVector xc = best_cc, xs = best_cs, yc = xc, ys = xs;
  double lip = std::max(eig_c.eigenvalues().maxCoeff(),
                        M > 0 ? eig_s.eigenvalues().maxCoeff() : 0.0);
  double tk = 1.0;
  double obj_prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 6000; ++it) {
    RealVector zc = yc - (gc * yc - bc) / lip;
    RealVector zs = M > 0 ? (ys - (gs * ys - bs) / lip).eval() : ys;
    project_group_l1(zc, zs, radius);
    double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    yc = zc + ((tk - 1.0) / tn) * (zc - xc);
    if (M > 0) ys = zs + ((tk - 1.0) / tn) * (zs - xs);
    xc = zc;
    xs = zs;
    tk = tn;
    if (it % 100 == 99) {
      double obj = 0.5 * xc.dot(gc * xc) - bc.dot(xc);
      if (M > 0) obj += 0.5 * xs.dot(gs * xs) - bs.dot(xs);
      if (std::abs(obj_prev - obj) <= 1e-16 * (1.0 + std::abs(obj))) break;
      obj_prev = obj;
    }
  }
  project_group_l1(xc, xs, radius);
  double e = sup_err(xc, xs);
  if (!have_feasible || e < best_err) {
    best_cc = xc;
    best_cs = xs;
  }
  fit.cc = best_cc;
  fit.cs = best_cs;
  return fit;
}

inline ComplexFourierSeries to_complex(const XBasisFit& fit) {
  ComplexFourierSeries cf;
  cf.M = fit.M;
  cf.c.assign(static_cast<std::size_t>(2 * fit.M + 1), Complex(0.0, 0.0));
  cf.c[static_cast<std::size_t>(fit.M)] = Complex(fit.cc[0], 0.0);
  for (int m = 1; m <= fit.M; ++m) {
    Complex cm = 0.5 * Complex(fit.cc[m], -fit.cs[m - 1]);
    cf.c[static_cast<std::size_t>(fit.M + m)] = cm;
    cf.c[static_cast<std::size_t>(fit.M - m)] = std::conj(cm);
  }
  return cf;
}

}  // namespace detail

/// Converts the truncated Taylor series into the half-integer Fourier basis
/// e^{i pi m x / 2} with |m| <= M = 2 ceil(ln(4 ||a||_1 / eps) / delta) and
/// ||c||_1 <= ||a||_1. The coefficients come from a norm-constrained
/// least-squares fit; accuracy is certified on a grid against the
/// polynomial at the 3 eps / 4 conversion budget.
inline ComplexFourierSeries taylor_to_fourier(const TaylorSeries& ts, double delta, double eps) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("taylor_to_fourier: delta must lie in (0, 1]");
  }
  double a_norm = ts.l1_norm();
  if (!(eps > 0.0) || eps > 4.0 * a_norm) {
    throw std::invalid_argument("taylor_to_fourier: eps must lie in (0, 4 ||a||_1]");
  }
  ComplexFourierSeries cf = detail::to_complex(detail::fit_fourier(ts, delta, eps));
  double w = 1.0 - delta;
  ErrorCertificate cert =
      verify_error_fn([&](double x) { return cf.evaluate_real(x); },
                      [&](double x) { return ts.evaluate(x); }, -w, w, 10001, 0.75 * eps);
  if (!cert.passed) {
    throw CertificateError("taylor_to_fourier: conversion certificate failed", cert);
  }
  return cf;
}

/// Rewrites the complex series in the variable p (x = 1 - p) as
/// constant + sum_m b1_m cos(t_m p) + b2_m sin(t_m p), t_m = pi m / 2.
/// The real form equals the real part of the complex series pointwise.
inline RealFourierSeries to_real_form(const ComplexFourierSeries& cf) {
  RealFourierSeries rf;
  rf.M = cf.M;
  rf.b1.resize(static_cast<std::size_t>(cf.M));
  rf.b2.resize(static_cast<std::size_t>(cf.M));
  rf.t.resize(static_cast<std::size_t>(cf.M));
  rf.constant = cf.coeff(0).real();
  for (int m = 1; m <= cf.M; ++m) {
    // c_m e^{i pi m (1-p)/2} folds the fixed phase e^{i pi m/2} into u_m.
    Complex phase = std::exp(Complex(0.0, 0.5 * M_PI * m));
    Complex up = cf.coeff(m) * phase;
    Complex um = cf.coeff(-m) * std::conj(phase);
    rf.b1[static_cast<std::size_t>(m) - 1] = up.real() + um.real();
    rf.b2[static_cast<std::size_t>(m) - 1] = up.imag() - um.imag();
    rf.t[static_cast<std::size_t>(m) - 1] = 0.5 * M_PI * m;
  }
  return rf;
}

/// Builds a certified Fourier approximation of ln p on [p_min, 1]. The
/// truncation order is chosen from the exact Taylor tail so the eps/4
/// truncation budget genuinely holds, and the conversion takes the rest;
/// the grid certificate against ln is the contract. If the certificate
/// fails the truncation order is escalated a few times before giving up.
inline LogSeries build_log_series(double p_min, double eps) {
  if (!(p_min > 0.0) || !(p_min < 1.0)) {
    throw std::invalid_argument("build_log_series: p_min must lie in (0, 1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("build_log_series: eps must be positive");

  int K = detail::pick_build_truncation(p_min, eps);
  LogSeries out;
  for (int attempt = 0; attempt < 4; ++attempt) {
    TaylorSeries ts = taylor_log(K);
    ComplexFourierSeries cf = detail::to_complex(detail::fit_fourier(ts, p_min, eps));
    out.p_min = p_min;
    out.eps = eps;
    out.series = to_real_form(cf);
    out.certificate = verify_error(
        out.series, [](double p) { return std::log(p); }, p_min, 1.0, 10001, eps);
    if (out.certificate.passed) return out;
    K = static_cast<int>(std::ceil(K * 1.6)) + 1;
  }
  throw CertificateError("build_log_series: certificate failed", out.certificate, out);
}

}  // namespace gibbsprep
