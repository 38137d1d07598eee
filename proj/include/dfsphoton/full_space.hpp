#pragma once

// Unrestricted 3^(N+1)-dimensional product space for small N, used as an
// independent oracle for the restricted symmetric-basis dynamics.

#include <Eigen/SparseCore>

#include "dfsphoton/dynamics.hpp"
#include "dfsphoton/pulse.hpp"
#include "dfsphoton/state_space.hpp"

namespace dfsphoton {

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr int kFullSpaceMaxAtoms = 4;

/// Product space of N register atoms (sites 0..N-1) and the ancilla (site N),
/// each with levels g, s, e. The level of site n is the base-3 digit n of the
/// index.
class FullSpace {
 public:
  explicit FullSpace(int n_atoms);

  int n_atoms() const { return n_atoms_; }
  Eigen::Index dimension() const { return dim_; }
  int ancilla_site() const { return n_atoms_; }

  /// |to><from| on one site.
  SparseCMatrix site_operator(int site, Level to, Level from) const;
  /// sum over register sites of |to><from|.
  SparseCMatrix register_sum(Level to, Level from) const;
  /// S_ge over all N + 1 atoms.
  SparseCMatrix collective_lower() const;
  /// S_ee over all N + 1 atoms.
  SparseCMatrix excited_count() const;

  SparseCMatrix h_eff(const PulseSegment& segment, const PhysicalParams& params) const;

  /// Columns are the restricted basis states written out in the product space.
  CMatrix isometry(const SymmetricBasis& basis) const;
  CVector embed(const StateVector& state) const;
  /// Symmetric-sector projection V^dagger psi.
  StateVector project(const CVector& full, const BasisPtr& basis) const;

 private:
  int n_atoms_;
  Eigen::Index dim_;
};

struct OracleOptions {
  bool master_equation = true;
  double abs_tol = 1e-12;  ///< Dormand-Prince tolerances for the density matrix
  double rel_tol = 1e-10;
};

struct OracleResult {
  CVector full_state;          ///< non-Hermitian evolution in the product space
  StateVector projected;       ///< its symmetric-sector projection
  double leakage = 0.0;        ///< ||psi - V V^dagger psi||
  CMatrix density;             ///< Lindblad evolution (empty when disabled)

  /// |<target|psi>| with the target embedded in the product space.
  double pure_fidelity(const StateVector& target) const;
  /// sqrt(<target|rho|target>).
  double master_fidelity(const StateVector& target) const;

  int n_atoms = 0;
};

/// Evolves the embedded initial state through the sequence with the
/// product-space H_eff and, optionally, the Lindblad equation with the
/// collective jump S_ge (rate Gamma_1D) and individual jumps sigma_ge^n
/// (rate Gamma*) on all N + 1 atoms. Rejects N > 4.
OracleResult full_space_oracle(const PulseSequence& sequence, const PhysicalParams& params,
                               const StateVector& initial, const OracleOptions& options = {});

}  // namespace dfsphoton
