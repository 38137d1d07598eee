#include "dfsphoton/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace dfsphoton {

namespace {

constexpr int kMaxHalvings = 12;

bool all_finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  }
  return true;
}

// exp(a / 2^level)^(2^level) applied to psi.
CVector propagate(const CMatrix& a, int level, const CVector& psi) {
  CMatrix step = (a / std::ldexp(1.0, level)).exp();
  for (int i = 0; i < level; ++i) step = step * step;
  return step * psi;
}

}  // namespace

PhysicalParams PhysicalParams::from_purcell(int n_atoms, double purcell) {
  if (!(purcell > 0.0) || !std::isfinite(purcell)) {
    throw std::invalid_argument("purcell factor must be positive and finite");
  }
  PhysicalParams p;
  p.n_atoms = n_atoms;
  p.gamma_star = 1.0 / purcell;
  p.validate();
  return p;
}

void PhysicalParams::validate() const {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  if (!(gamma_star > 0.0) || !std::isfinite(gamma_star)) {
    throw std::invalid_argument("gamma_star must be positive and finite");
  }
  if (gamma_1d != 1.0) throw std::invalid_argument("gamma_1d is the rate unit and must be 1");
}

Operator hermitian_drive(const DickeOperators& ops, const PulseSegment& segment) {
  segment.validate();
  const auto& d = ops.drives;
  Operator drive = d.register_se * (segment.omega_r / 2.0) + d.ancilla_se * (segment.omega_anc / 2.0) +
                   d.ancilla_sg * (segment.omega_c / 2.0);
  return drive + drive.adjoint() + d.excited_count * Complex(segment.delta_e);
}

Operator build_h_eff(const DickeOperators& ops, const PulseSegment& segment,
                     const PhysicalParams& params) {
  params.validate();
  if (params.n_atoms != ops.basis->n_atoms()) {
    throw std::invalid_argument("params.n_atoms = " + std::to_string(params.n_atoms) +
                                " does not match the basis (" +
                                std::to_string(ops.basis->n_atoms()) + ")");
  }
  const Complex i(0.0, 1.0);
  return hermitian_drive(ops, segment) - ops.collective_decay * (i * params.gamma_1d / 2.0) -
         ops.drives.excited_count * (i * params.gamma_star / 2.0);
}

Operator build_h_eff(const BasisPtr& basis, const PulseSegment& segment,
                     const PhysicalParams& params) {
  return build_h_eff(make_operators(basis), segment, params);
}

CVector evolve_vector(const CMatrix& h, double duration, const CVector& psi, double tolerance) {
  if (h.rows() != h.cols() || h.cols() != psi.size()) {
    throw std::invalid_argument("evolve: matrix and vector sizes differ");
  }
  if (!std::isfinite(duration) || duration < 0.0) {
    throw std::invalid_argument("evolution duration must be finite and >= 0");
  }
  if (!all_finite(psi)) throw std::runtime_error("state has non-finite amplitudes");
  if (duration == 0.0) return psi;

  const CMatrix a = h * Complex(0.0, -duration);
  const double scale = std::max(psi.norm(), 1e-300);

  CVector coarse = propagate(a, 0, psi);
  for (int level = 1; level <= kMaxHalvings; ++level) {
    CVector fine = propagate(a, level, psi);
    if (!all_finite(fine)) throw std::runtime_error("evolution produced non-finite amplitudes");
    if ((fine - coarse).norm() <= tolerance * scale) return fine;
    coarse = std::move(fine);
  }
  throw std::runtime_error("evolve: halved-step check did not reach tolerance " +
                           std::to_string(tolerance) + " for duration " + std::to_string(duration));
}

StateVector evolve(const StateVector& state, const Operator& h, double duration,
                   double tolerance) {
  if (state.basis() != h.basis()) throw std::invalid_argument("state and operator bases differ");
  return {state.basis(), evolve_vector(h.matrix(), duration, state.amplitudes(), tolerance)};
}

bool Trajectory::norm_non_increasing(double slack) const {
  for (std::size_t i = 1; i < squared_norms.size(); ++i) {
    if (squared_norms[i] > squared_norms[i - 1] + slack) return false;
  }
  return true;
}

Trajectory run_sequence(const PulseSequence& sequence, const StateVector& initial,
                        const PhysicalParams& params, double tolerance) {
  const auto ops = make_operators(initial.basis());
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(initial);
  traj.squared_norms.push_back(initial.squared_norm());

  for (const auto& step : sequence.steps()) {
    const auto h = build_h_eff(ops, step.segment, params);
    traj.snapshots.push_back(evolve(traj.snapshots.back(), h, step.segment.duration, tolerance));
    traj.times.push_back(traj.times.back() + step.segment.duration);
    traj.squared_norms.push_back(traj.snapshots.back().squared_norm());
  }
  return traj;
}

double fidelity(const StateVector& state, const StateVector& target) {
  return std::abs(target.inner(state));
}

double fidelity_renormalized(const StateVector& state, const StateVector& target) {
  const double n = state.norm();
  if (n == 0.0) throw std::invalid_argument("renormalized fidelity of a zero-norm state");
  return std::abs(target.inner(state)) / n;
}

}  // namespace dfsphoton
