#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "gibbsprep/numkernel.hpp"
#include "gibbsprep/random.hpp"

namespace gibbsprep {

enum class Pauli { I, X, Y, Z };

inline char pauli_to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("pauli_from_char: unknown letter '") + c + "'");
  }
}

/// Tensor product of single-qubit Paulis. letters[0] acts on the leftmost
/// (most significant) qubit.
struct PauliString {
  int n = 0;
  std::vector<Pauli> letters;

  PauliString() = default;
  PauliString(int n_, std::vector<Pauli> letters_) : n(n_), letters(std::move(letters_)) {
    if (n < 1 || static_cast<int>(letters.size()) != n) {
      throw std::invalid_argument("PauliString: letters length must equal qubit count");
    }
  }
  static PauliString parse(const std::string& s) {
    std::vector<Pauli> ls(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) ls[i] = pauli_from_char(s[i]);
    return PauliString(static_cast<int>(s.size()), std::move(ls));
  }

  std::string str() const {
    std::string s(letters.size(), 'I');
    for (std::size_t i = 0; i < letters.size(); ++i) s[i] = pauli_to_char(letters[i]);
    return s;
  }

  /// Dense matrix. Each Pauli string has exactly one nonzero per column.
  ComplexMatrix matrix() const {
    Index dim = Index{1} << n;
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (Index col = 0; col < dim; ++col) {
      Index row = col;
      Complex factor(1.0, 0.0);
      for (int q = 0; q < n; ++q) {
        int bitpos = n - 1 - q;  // letters[0] = most significant bit
        int bit = static_cast<int>((col >> bitpos) & 1);
        switch (letters[q]) {
          case Pauli::I: break;
          case Pauli::Z: factor *= bit ? -1.0 : 1.0; break;
          case Pauli::X: row ^= Index{1} << bitpos; break;
          case Pauli::Y:
            row ^= Index{1} << bitpos;
            factor *= bit ? Complex(0, -1) : Complex(0, 1);
            break;
        }
      }
      m(row, col) = factor;
    }
    return m;
  }
};

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;
};

/// Real linear combination of Pauli strings. Duplicate strings are merged
/// and exact-zero terms dropped on construction; terms are kept sorted by
/// letters so equal sums compare equal.
class PauliSum {
 public:
  explicit PauliSum(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("PauliSum: need at least one qubit");
  }
  PauliSum(int n, const std::vector<PauliTerm>& terms) : PauliSum(n) {
    std::map<std::string, double> merged;
    for (const auto& t : terms) {
      if (t.string.n != n_) {
        throw std::invalid_argument("PauliSum: term qubit count mismatch");
      }
      if (!std::isfinite(t.coeff)) {
        throw std::invalid_argument("PauliSum: non-finite coefficient");
      }
      merged[t.string.str()] += t.coeff;
    }
    for (const auto& [letters, coeff] : merged) {
      if (coeff != 0.0) terms_.push_back({coeff, PauliString::parse(letters)});
    }
  }

  int n() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  PauliSum scaled(double factor) const {
    std::vector<PauliTerm> ts = terms_;
    for (auto& t : ts) t.coeff *= factor;
    return PauliSum(n_, ts);
  }

  PauliSum plus(const PauliSum& other) const {
    if (other.n_ != n_) throw std::invalid_argument("PauliSum: qubit count mismatch");
    std::vector<PauliTerm> ts = terms_;
    ts.insert(ts.end(), other.terms_.begin(), other.terms_.end());
    return PauliSum(n_, ts);
  }

 private:
  int n_;
  std::vector<PauliTerm> terms_;
};

/// H = sum_k alpha_k V_k with alpha_k > 0 and V_k unitary (signed Pauli
/// strings here). alpha_norm is the 1-norm of the coefficients, which
/// normalizes the energy-estimation circuit.
struct LCUDecomposition {
  std::vector<double> alphas;
  std::vector<ComplexMatrix> unitaries;
  double alpha_norm = 0.0;
};

struct AdiabaticFamily {
  PauliSum h0;
  PauliSum h1;

  AdiabaticFamily(PauliSum h0_, PauliSum h1_) : h0(std::move(h0_)), h1(std::move(h1_)) {
    if (h0.n() != h1.n()) throw std::invalid_argument("AdiabaticFamily: qubit count mismatch");
  }
  int n() const { return h0.n(); }
};

enum class CouplingTopology { AllPairs, Chain };

inline ComplexMatrix to_matrix(const PauliSum& h) {
  if (h.n() > 8) {
    throw std::invalid_argument("to_matrix: dense assembly limited to 8 qubits");
  }
  Index dim = Index{1} << h.n();
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.coeff * t.string.matrix();
  return m;
}

/// Splits signed Pauli coefficients into positive weights and signed
/// unitaries: alpha_k = |coeff_k|, V_k = sign(coeff_k) * P_k.
inline LCUDecomposition lcu_decompose(const PauliSum& h) {
  LCUDecomposition lcu;
  for (const auto& t : h.terms()) {
    if (t.coeff == 0.0) continue;
    lcu.alphas.push_back(std::abs(t.coeff));
    lcu.unitaries.push_back((t.coeff < 0 ? -1.0 : 1.0) * t.string.matrix());
    lcu.alpha_norm += std::abs(t.coeff);
  }
  if (lcu.alphas.empty()) {
    throw std::invalid_argument("lcu_decompose: Hamiltonian has no nonzero term");
  }
  return lcu;
}

/// H'(s) = H0 + s * H1, term-wise. s outside [0, 1] is allowed; the
/// optimizer explores the path freely.
inline PauliSum interpolate(const AdiabaticFamily& family, double s) {
  return family.h0.plus(family.h1.scaled(s));
}

/// Random field/coupling instance: H0 = sum_j a_j Z_j,
/// H1 = sum_j b_j X_j + sum couplings c_{jk} Z_j Z_k, all coefficients
/// i.i.d. uniform on [-1, 1]. Draw order: a_1..a_n, b_1..b_n, then c_{jk}
/// in lexicographic (j, k) order.
inline AdiabaticFamily random_instance(int n, std::uint64_t seed,
                                       CouplingTopology topology = CouplingTopology::AllPairs) {
  if (n < 1) throw std::invalid_argument("random_instance: need at least one qubit");
  Rng rng(seed);
  auto z_at = [&](int j) {
    std::vector<Pauli> ls(n, Pauli::I);
    ls[j] = Pauli::Z;
    return PauliString(n, std::move(ls));
  };
  auto x_at = [&](int j) {
    std::vector<Pauli> ls(n, Pauli::I);
    ls[j] = Pauli::X;
    return PauliString(n, std::move(ls));
  };
  std::vector<PauliTerm> t0, t1;
  for (int j = 0; j < n; ++j) t0.push_back({rng.uniform(-1.0, 1.0), z_at(j)});
  for (int j = 0; j < n; ++j) t1.push_back({rng.uniform(-1.0, 1.0), x_at(j)});
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (topology == CouplingTopology::Chain && k != j + 1) continue;
      std::vector<Pauli> ls(n, Pauli::I);
      ls[j] = Pauli::Z;
      ls[k] = Pauli::Z;
      t1.push_back({rng.uniform(-1.0, 1.0), PauliString(n, std::move(ls))});
    }
  }
  return AdiabaticFamily(PauliSum(n, t0), PauliSum(n, t1));
}

/// ln Tr e^{-beta H}, evaluated with the spectrum shifted for stability.
inline double log_partition(const PauliSum& h, double beta) {
  HermitianEig eig = hermitian_eig(to_matrix(h));
  double emin = eig.values.minCoeff();
  double acc = 0.0;
  for (Index i = 0; i < eig.values.size(); ++i) acc += std::exp(-beta * (eig.values[i] - emin));
  return std::log(acc) - beta * emin;
}

/// e^{-beta H} / Tr e^{-beta H}.
inline DensityMatrix gibbs_state(const PauliSum& h, double beta) {
  if (beta < 0) throw std::invalid_argument("gibbs_state: beta must be non-negative");
  HermitianEig eig = hermitian_eig(to_matrix(h));
  double emin = eig.values.minCoeff();
  RealVector q(eig.values.size());
  for (Index i = 0; i < q.size(); ++i) q[i] = std::exp(-beta * (eig.values[i] - emin));
  q /= q.sum();
  ComplexMatrix rho = eig.vectors * q.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace gibbsprep
