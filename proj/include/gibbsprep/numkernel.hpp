#pragma once

#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "gibbsprep/common.hpp"
#include "gibbsprep/random.hpp"

namespace gibbsprep {

/// Largest entry of |m - m^dagger|; zero for exactly Hermitian input.
inline double hermiticity_gap(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

struct HermitianEig {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix. Inputs within the Hermiticity
/// tolerance are symmetrized first so benign round-off does not leak into
/// the spectrum.
inline HermitianEig hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("hermitian_eig: matrix has non-finite entries");
  }
  double gap = hermiticity_gap(m);
  if (gap > kHermitianTol) {
    std::ostringstream os;
    os << "hermitian_eig: matrix is not Hermitian (max asymmetry " << gap << ")";
    throw std::invalid_argument(os.str());
  }
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  return HermitianEig{solver.eigenvalues(), solver.eigenvectors()};
}

/// f applied to the spectrum: V diag(f(lambda)) V^dagger.
template <typename Fn>
ComplexMatrix matrix_function(const ComplexMatrix& m, Fn&& f) {
  HermitianEig eig = hermitian_eig(m);
  ComplexVector fx(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    Complex v = f(eig.values[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "matrix_function: f is not finite at eigenvalue " << eig.values[i]
         << " (index " << i << ")";
      throw std::domain_error(os.str());
    }
    fx[i] = v;
  }
  return eig.vectors * fx.asDiagonal() * eig.vectors.adjoint();
}

/// Hermitian, unit-trace, positive-semidefinite operator. Validated on
/// construction; eigenvalues in [-1e-10, 0) are clamped to zero and the
/// spectrum renormalized, anything more negative is rejected.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    }
    if (!m.allFinite()) {
      throw std::invalid_argument("DensityMatrix: matrix has non-finite entries");
    }
    double gap = hermiticity_gap(m);
    if (gap > kHermitianTol) {
      std::ostringstream os;
      os << "DensityMatrix: not Hermitian (max asymmetry " << gap << ")";
      throw std::invalid_argument(os.str());
    }
    double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
      std::ostringstream os;
      os << "DensityMatrix: trace is " << tr << ", expected 1";
      throw std::invalid_argument(os.str());
    }
    mat_ = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(mat_);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("DensityMatrix: eigensolver failed");
    }
    evals_ = solver.eigenvalues();
    evecs_ = solver.eigenvectors();
    double min_eig = evals_.minCoeff();
    if (min_eig < -kNegativeEigTol) {
      std::ostringstream os;
      os << "DensityMatrix: negative eigenvalue " << min_eig;
      throw std::invalid_argument(os.str());
    }
    if (min_eig < 0.0) {
      for (Index i = 0; i < evals_.size(); ++i) evals_[i] = std::max(0.0, evals_[i]);
      evals_ /= evals_.sum();
      mat_ = evecs_ * evals_.cast<Complex>().asDiagonal() * evecs_.adjoint();
      mat_ = 0.5 * (mat_ + mat_.adjoint());
    }
  }

  Index dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }
  /// Ascending, clamped to be non-negative.
  const RealVector& eigenvalues() const { return evals_; }
  const ComplexMatrix& eigenvectors() const { return evecs_; }

 private:
  ComplexMatrix mat_;
  RealVector evals_;
  ComplexMatrix evecs_;
};

/// Unit-norm complex state vector.
class PureStateVector {
 public:
  explicit PureStateVector(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 1) {
      throw std::invalid_argument("PureStateVector: empty amplitude vector");
    }
    if (!amps_.allFinite()) {
      throw std::invalid_argument("PureStateVector: non-finite amplitudes");
    }
    double norm = amps_.norm();
    if (std::abs(norm - 1.0) > kHermitianTol) {
      std::ostringstream os;
      os << "PureStateVector: norm is " << norm << ", expected 1";
      throw std::invalid_argument(os.str());
    }
  }

  Index dim() const { return amps_.size(); }
  const ComplexVector& amplitudes() const { return amps_; }

  DensityMatrix to_density_matrix() const {
    return DensityMatrix(amps_ * amps_.adjoint());
  }

 private:
  ComplexVector amps_;
};

enum class Subsystem { A, B };

namespace detail {
inline void check_bipartition(Index dim, Index dim_a, Index dim_b, const char* who) {
  if (dim_a < 1 || dim_b < 1 || dim_a * dim_b != dim) {
    std::ostringstream os;
    os << who << ": dimension " << dim << " does not factor as " << dim_a << " x " << dim_b;
    throw std::invalid_argument(os.str());
  }
}
}  // namespace detail

/// Reduced state of a bipartite density matrix. Index convention: the flat
/// index is i * dimB + j with i on subsystem A and j on subsystem B.
inline DensityMatrix partial_trace(const DensityMatrix& state, Index dim_a, Index dim_b,
                                   Subsystem keep) {
  detail::check_bipartition(state.dim(), dim_a, dim_b, "partial_trace");
  const ComplexMatrix& rho = state.matrix();
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index k = 0; k < dim_a; ++k)
        for (Index j = 0; j < dim_b; ++j) out(i, k) += rho(i * dim_b + j, k * dim_b + j);
    return DensityMatrix(out);
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Index j = 0; j < dim_b; ++j)
    for (Index l = 0; l < dim_b; ++l)
      for (Index i = 0; i < dim_a; ++i) out(j, l) += rho(i * dim_b + j, i * dim_b + l);
  return DensityMatrix(out);
}

inline DensityMatrix partial_trace(const PureStateVector& state, Index dim_a, Index dim_b,
                                   Subsystem keep) {
  detail::check_bipartition(state.dim(), dim_a, dim_b, "partial_trace");
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap psi(state.amplitudes().data(), dim_a, dim_b);
  if (keep == Subsystem::A) {
    return DensityMatrix(psi * psi.adjoint());
  }
  return DensityMatrix(psi.transpose() * psi.conjugate());
}

/// Half the 1-norm of a - b; in [0, 1] for density matrices.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  HermitianEig eig = hermitian_eig(a.matrix() - b.matrix());
  double d = 0.5 * eig.values.cwiseAbs().sum();
  return std::clamp(d, 0.0, 1.0);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Haar-distributed unitary from a QR-corrected Ginibre matrix.
inline ComplexMatrix random_unitary(Index dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    double ad = std::abs(d);
    q.col(j) *= ad > 0 ? d / ad : Complex(1, 0);
  }
  return q;
}

/// Random density matrix whose spectrum is bounded below by min_eigenvalue:
/// a flat-Dirichlet spectrum is mixed toward uniform and conjugated by a
/// Haar unitary. Requires min_eigenvalue * dim < 1.
inline DensityMatrix random_density_matrix(Index dim, double min_eigenvalue, Rng& rng) {
  if (min_eigenvalue < 0 || min_eigenvalue * static_cast<double>(dim) >= 1.0) {
    throw std::invalid_argument("random_density_matrix: infeasible eigenvalue floor");
  }
  RealVector p(dim);
  for (Index i = 0; i < dim; ++i) p[i] = -std::log(1.0 - rng.uniform());
  p /= p.sum();
  p = (min_eigenvalue * RealVector::Ones(dim) + (1.0 - min_eigenvalue * dim) * p).eval();
  ComplexMatrix u = random_unitary(dim, rng);
  ComplexMatrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace gibbsprep
