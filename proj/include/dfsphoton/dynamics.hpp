#pragma once

// Non-Hermitian effective Hamiltonian of the driven ensemble and its
// time evolution on the restricted symmetric basis.

#include <vector>

#include "dfsphoton/pulse.hpp"
#include "dfsphoton/state_space.hpp"

namespace dfsphoton {

inline constexpr double kDefaultTolerance = 1e-10;

/// All rates in units of Gamma_1D, which is fixed to 1.
struct PhysicalParams {
  int n_atoms = 1;
  double gamma_star = 1e-2;
  double gamma_1d = 1.0;

  double purcell() const { return gamma_1d / gamma_star; }
  static PhysicalParams from_purcell(int n_atoms, double purcell);
  void validate() const;
};

/// Delta_e S_ee + drive terms + H.c., the Hermitian part of H_eff.
Operator hermitian_drive(const DickeOperators& ops, const PulseSegment& segment);

/// H_eff = hermitian_drive - i Gamma_1D S_eg S_ge / 2 - i Gamma* S_ee / 2.
Operator build_h_eff(const DickeOperators& ops, const PulseSegment& segment,
                     const PhysicalParams& params);
Operator build_h_eff(const BasisPtr& basis, const PulseSegment& segment,
                     const PhysicalParams& params);

/// exp(-i H t) |state>. The result is accepted once doubling the number of
/// exponential sub-steps changes it by less than tolerance (relative to the
/// input norm); otherwise std::runtime_error.
StateVector evolve(const StateVector& state, const Operator& h, double duration,
                   double tolerance = kDefaultTolerance);

/// exp(-i H t) psi for a raw matrix, with the same halved-step acceptance
/// test as evolve.
CVector evolve_vector(const CMatrix& h, double duration, const CVector& psi,
                      double tolerance = kDefaultTolerance);

struct Trajectory {
  std::vector<double> times;             ///< segment boundaries, starting at 0
  std::vector<StateVector> snapshots;    ///< state at each boundary
  std::vector<double> squared_norms;

  const StateVector& final_state() const { return snapshots.back(); }
  /// True when no recorded squared norm exceeds its predecessor by more than slack.
  bool norm_non_increasing(double slack = 1e-10) const;
};

Trajectory run_sequence(const PulseSequence& sequence, const StateVector& initial,
                        const PhysicalParams& params, double tolerance = kDefaultTolerance);

/// |<target|state>|, not renormalized.
double fidelity(const StateVector& state, const StateVector& target);
/// |<target|state>| / ||state||; throws for a zero-norm state.
double fidelity_renormalized(const StateVector& state, const StateVector& target);

}  // namespace dfsphoton
