#pragma once

// Permutation-symmetric restricted Hilbert space of N register atoms plus one
// individually addressed ancilla. Basis states are |F_{m,k}> (x) |a>_A where m
// register atoms sit in |s>, k in |e>, and the ancilla is in a in {g, s, e}.

#include <complex>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace dfsphoton {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Ancilla level. The numeric value fixes the basis order g < s < e.
enum class Level : int { kG = 0, kS = 1, kE = 2 };

struct BasisLabel {
  int m = 0;  ///< register atoms in |s>
  int k = 0;  ///< register atoms in |e>
  Level ancilla = Level::kG;

  auto operator<=>(const BasisLabel&) const = default;
};

class SymmetricBasis;
using BasisPtr = std::shared_ptr<const SymmetricBasis>;

/// Ordered, bijectively indexed set of admissible (m, k, a) tuples with
/// 0 <= m <= m_max, 0 <= k <= k_max and m + k <= N. Order is lexicographic in
/// (m, k, a). Immutable once built; share it through BasisPtr.
class SymmetricBasis {
 public:
  int n_atoms() const { return n_atoms_; }
  int m_max() const { return m_max_; }
  int k_max() const { return k_max_; }
  std::size_t dimension() const { return labels_.size(); }

  const std::vector<BasisLabel>& labels() const { return labels_; }
  const BasisLabel& label(std::size_t index) const { return labels_.at(index); }

  std::optional<std::size_t> find(int m, int k, Level a) const;
  bool contains(int m, int k, Level a) const { return find(m, k, a).has_value(); }
  /// Throws std::out_of_range when the tuple is not part of the basis.
  std::size_t index(int m, int k, Level a) const;

 private:
  friend BasisPtr build_basis(int n_atoms, int m_max, int k_max);
  SymmetricBasis(int n_atoms, int m_max, int k_max);

  int n_atoms_;
  int m_max_;
  int k_max_;
  std::vector<BasisLabel> labels_;
  std::vector<std::ptrdiff_t> lookup_;  // dense (m, k, a) table, -1 if absent
};

/// Rejects n_atoms < 1, m_max < 0, m_max > n_atoms and k_max < 0.
BasisPtr build_basis(int n_atoms, int m_max, int k_max = 2);

/// N! / (m! k! (N-m-k)!), evaluated as a product of binomials in long double.
double multinomial_norm(int n_atoms, int m, int k);

/// Complex amplitudes over a SymmetricBasis.
class StateVector {
 public:
  StateVector(BasisPtr basis, CVector amplitudes);
  static StateVector zero(BasisPtr basis);
  static StateVector basis_state(BasisPtr basis, int m, int k, Level a);

  const BasisPtr& basis() const { return basis_; }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int m, int k, Level a) const;

  double squared_norm() const { return amplitudes_.squaredNorm(); }
  double norm() const { return amplitudes_.norm(); }
  /// <this|other>
  Complex inner(const StateVector& other) const;

 private:
  BasisPtr basis_;
  CVector amplitudes_;
};

/// Dense operator on a SymmetricBasis.
class Operator {
 public:
  Operator(BasisPtr basis, CMatrix matrix);
  static Operator zero(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  const CMatrix& matrix() const { return matrix_; }

  Operator adjoint() const { return {basis_, matrix_.adjoint()}; }
  StateVector apply(const StateVector& state) const;
  Complex element(std::size_t row, std::size_t col) const { return matrix_(row, col); }
  /// <state|O|state>
  Complex expectation(const StateVector& state) const;

  Operator operator*(const Operator& rhs) const;
  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(Complex scale) const { return {basis_, matrix_ * scale}; }

 private:
  void require_same_basis(const Operator& rhs) const;

  BasisPtr basis_;
  CMatrix matrix_;
};

/// Collective lowering S_ge = sum over the N register atoms and the ancilla of
/// sigma_ge. Acts as sqrt(k (N-m-k+1)) |F_{m,k-1}> on the register plus the
/// unit ancilla term |e>_A -> |g>_A.
Operator collective_lower(const BasisPtr& basis);

/// Drive and counting operators. sigma_ij = |i><j|, so register_se maps a
/// register |e> to |s> and ancilla_sg maps |g>_A to |s>_A.
struct DriveOperators {
  Operator register_se;    ///< sum_n sigma^n_se over the register
  Operator ancilla_se;     ///< sigma^A_se
  Operator ancilla_sg;     ///< sigma^A_sg
  Operator excited_count;  ///< S_ee over register and ancilla (k + [a == e])
};

DriveOperators drive_operators(const BasisPtr& basis);

/// Operators shared by every Hamiltonian built on one basis.
struct DickeOperators {
  BasisPtr basis;
  Operator lower;           ///< S_ge
  Operator collective_decay;  ///< S_eg S_ge
  DriveOperators drives;
};

DickeOperators make_operators(const BasisPtr& basis);

/// Psi_g^(m) = |F_{m,0}> (x) |g>_A = |D_m> (x) |g>_A; valid for m >= 0.
StateVector psi_g(const BasisPtr& basis, int m);

/// The three permutation-symmetric DFS states for excitation m >= 1.
struct DarkStateTrio {
  StateVector psi_s;  ///< |F_{m-1,0}> (x) |s>_A
  StateVector psi_g;  ///< |F_{m,0}> (x) |g>_A
  StateVector psi_e;  ///< sqrt(N_m/(N_m+1)) |F_{m-1,0}>|e>_A - sqrt(1/(N_m+1)) |F_{m-1,1}>|g>_A
};

DarkStateTrio dark_state_trio(const BasisPtr& basis, int m);

/// Superradiant partners outside the DFS. chi_s needs m >= 2.
struct SuperradiantPair {
  std::optional<StateVector> chi_s;  ///< |F_{m-2,1}> (x) |s>_A
  StateVector chi_g;  ///< sqrt(1/(N_m+1)) |F_{m-1,0}>|e>_A + sqrt(N_m/(N_m+1)) |F_{m-1,1}>|g>_A
};

SuperradiantPair superradiant_pair(const BasisPtr& basis, int m);

}  // namespace dfsphoton
