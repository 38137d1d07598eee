#pragma once

// Pulse-sequence synthesis: Fock ladders, arbitrary Dicke superpositions by
// back-solving on the ideal dark-state ladder, detuning choice, and the final
// s -> e mapping pulse.

#include <optional>
#include <string>
#include <vector>

#include "dfsphoton/dynamics.hpp"
#include "dfsphoton/pulse.hpp"
#include "dfsphoton/state_space.hpp"

namespace dfsphoton {

/// Coefficients d_m of sum_m d_m |D_m> (x) |g>_A, m = 0..m_max.
class TargetSuperposition {
 public:
  /// Normalizes the input; rejects empty or all-zero coefficient lists.
  static TargetSuperposition normalized(std::vector<Complex> coefficients);
  /// Accepts only lists that are already normalized within 1e-12.
  static TargetSuperposition exact(std::vector<Complex> coefficients);
  static TargetSuperposition fock(int m);
  /// (|D_0> + |D_m>) / sqrt(2)
  static TargetSuperposition phi(int m);

  const std::vector<Complex>& coefficients() const { return d_; }
  int m_max() const { return static_cast<int>(d_.size()) - 1; }
  /// Highest m with |d_m| above 1e-14.
  int top_excitation() const;

  /// sum_m d_m Psi_g^(m) on the given basis.
  StateVector as_state(const BasisPtr& basis) const;

 private:
  explicit TargetSuperposition(std::vector<Complex> d) : d_(std::move(d)) {}
  std::vector<Complex> d_;
};

/// Omega_r sqrt(m / N_m), same phase as omega_r; equalizes the Stark shifts of
/// Psi_s^(m) and Psi_g^(m).
Complex resonance_omega_anc(int m, int n_atoms, Complex omega_r);

/// |Omega^(m)| = |Omega_r|^2 m / (2 |Delta_e| (N_m + 1)).
double effective_rabi(int m, int n_atoms, Complex omega_r, double delta_e);

/// Drive strengths used by the planners. Omega_r and Omega_c are magnitudes;
/// phases are chosen by the planner.
struct DriveSettings {
  double omega_r = 2e-3;
  double delta_e = 0.1;
  double omega_c = 1.0;

  void validate() const;
};

/// Raman segment for rung m with Raman phase phi on Omega_r (Omega_anc real).
PulseSegment raman_segment(int m, int n_atoms, const DriveSettings& drive, double duration,
                           double phase = 0.0);
/// Ancilla g <-> s segment with microwave phase phi, Delta_e = 0.
PulseSegment flip_segment(const DriveSettings& drive, double duration, double phase = 0.0);

/// For m = 1..m_target: flip of duration pi/Omega_c then Raman of duration
/// pi/|Omega^(m)|.
PulseSequence plan_fock(int m_target, int n_atoms, const DriveSettings& drive);

/// Dissipation-free projected dynamics on the 2 m_max + 1 dark states
/// [Psi_g^(0), Psi_s^(1), Psi_g^(1), ..., Psi_s^(m_max), Psi_g^(m_max)].
/// Raman segments act through second-order elimination of every Psi_e^(j);
/// flips act on all pairs (Psi_g^(j-1), Psi_s^(j)).
class IdealLadder {
 public:
  IdealLadder(int n_atoms, int m_max);

  int n_atoms() const { return n_atoms_; }
  int m_max() const { return m_max_; }
  int dimension() const { return 2 * m_max_ + 1; }
  static int index_g(int m) { return 2 * m; }
  static int index_s(int m) { return 2 * m - 1; }

  /// Projected Hamiltonian of a segment (Raman or flip; mapping segments are
  /// outside the ladder model and rejected).
  CMatrix hamiltonian(SegmentKind kind, const PulseSegment& segment) const;
  /// exp(-i H t) for the segment.
  CMatrix propagator(SegmentKind kind, const PulseSegment& segment) const;
  /// Applies the whole sequence to a ladder vector.
  CVector apply(const PulseSequence& sequence, const CVector& initial) const;
  /// Ladder vector of a target (d_m on the Psi_g^(m) slots).
  CVector embed(const TargetSuperposition& target) const;

 private:
  int n_atoms_;
  int m_max_;
  BasisPtr basis_;
  DickeOperators ops_;
  std::vector<CVector> ladder_;  // dark states as restricted-basis vectors
  std::vector<CVector> excited_;  // Psi_e^(j), j = 1..m_max
};

/// Back-solves the ladder from the target down to Psi_g^(0) and reverses the
/// rotations. Zero-duration segments are kept, so the result always holds
/// 2 * target.top_excitation() alternating segments.
PulseSequence plan_superposition(const TargetSuperposition& target, int n_atoms,
                                 const DriveSettings& drive);

enum class DetuningMode { kDeterministic, kPostSelected };

/// sqrt(Gamma* Gamma_1D), or min(N, cap) Gamma_1D in post-selected mode.
double optimal_detuning(const PhysicalParams& params,
                        DetuningMode mode = DetuningMode::kDeterministic, double cap = 0.3);

/// Resonant pi pulse on the register: Delta_e = 0, duration pi / Omega_r.
PulseSegment mapping_pulse(double omega_r_fast);
/// Warning text when omega_r_fast < 10 N Gamma_1D.
std::optional<std::string> mapping_pulse_warning(double omega_r_fast, int n_atoms);
/// pi flip that parks the ancilla in |s> before mapping.
PulseSegment parking_flip(double omega_c);

/// Planner configuration used by the simulation drivers.
struct ProtocolSettings {
  double raman_ratio = 0.02;  ///< Omega_r / Delta_e
  double omega_c = 1.0;
  std::optional<double> delta_e;  ///< default: optimal_detuning (deterministic)
  int k_max = 2;

  DriveSettings drive_for(const PhysicalParams& params) const;
};

struct SimulationResult {
  double fidelity = 0.0;               ///< |<target|psi>|
  double fidelity_renormalized = 0.0;  ///< |<target|psi>| / ||psi||
  double delta_e = 0.0;
  double omega_r = 0.0;
  double total_time = 0.0;
  std::size_t segments = 0;
  Trajectory trajectory;

  double infidelity() const { return 1.0 - fidelity; }
};

/// Plans the target, runs it on the restricted basis from Psi_g^(0) and scores
/// the final state against sum_m d_m Psi_g^(m).
SimulationResult simulate_target(const TargetSuperposition& target, const PhysicalParams& params,
                                 const ProtocolSettings& settings = {});

/// One Raman pi step Psi_s^(m) -> Psi_g^(m) in full dynamics.
SimulationResult simulate_raman_step(int m, const PhysicalParams& params,
                                     const ProtocolSettings& settings = {});

/// Runs simulate_target with k_max and 2 k_max and reports the fidelity change.
struct ConvergenceReport {
  double fidelity = 0.0;
  double fidelity_doubled = 0.0;
  double change() const { return std::abs(fidelity_doubled - fidelity); }
};
ConvergenceReport k_max_convergence(const TargetSuperposition& target, const PhysicalParams& params,
                                    const ProtocolSettings& settings = {});

}  // namespace dfsphoton
