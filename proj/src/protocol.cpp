#include "dfsphoton/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace dfsphoton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegligible = 1e-14;

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

// Rotation that empties component q of x into p when the inverse propagator
// exp(+i H t) is applied. h = <p|H|q> at drive phase 0, h_quarter at pi/2.
struct Rotation {
  double duration = 0.0;
  double phase = 0.0;
};

Rotation solve_rotation(Complex h, Complex h_quarter, Complex x_p, Complex x_q) {
  const double mag = std::abs(h);
  if (mag == 0.0) throw std::logic_error("ladder coupling vanishes; cannot rotate");
  const double turn = std::arg(h_quarter / h);
  if (std::abs(std::abs(turn) - kPi / 2.0) > 1e-9) {
    throw std::logic_error("ladder coupling does not carry the drive phase linearly");
  }
  const double sign = turn > 0.0 ? 1.0 : -1.0;

  Rotation rot;
  if (std::abs(x_q) <= kNegligible) return rot;
  rot.duration = 2.0 * std::atan2(std::abs(x_q), std::abs(x_p)) / (2.0 * mag);
  const double arg_p = std::abs(x_p) > 0.0 ? std::arg(x_p) : 0.0;
  const double beta = -kPi / 2.0 - (std::arg(x_q) - arg_p);
  rot.phase = wrap_phase((beta - std::arg(h)) / sign);
  return rot;
}

}  // namespace

// ---------------------------------------------------------------------------

TargetSuperposition TargetSuperposition::normalized(std::vector<Complex> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("target needs at least one coefficient");
  double norm2 = 0.0;
  for (const auto& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("target coefficients must be finite");
    }
    norm2 += std::norm(c);
  }
  if (norm2 == 0.0) throw std::invalid_argument("target coefficients are all zero");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : coefficients) c *= inv;
  return TargetSuperposition(std::move(coefficients));
}

TargetSuperposition TargetSuperposition::exact(std::vector<Complex> coefficients) {
  double norm2 = 0.0;
  for (const auto& c : coefficients) norm2 += std::norm(c);
  if (coefficients.empty() || std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("target coefficients must be normalized within 1e-12");
  }
  return TargetSuperposition(std::move(coefficients));
}

TargetSuperposition TargetSuperposition::fock(int m) {
  if (m < 0) throw std::invalid_argument("fock target needs m >= 0");
  std::vector<Complex> d(static_cast<std::size_t>(m) + 1, 0.0);
  d.back() = 1.0;
  return TargetSuperposition(std::move(d));
}

TargetSuperposition TargetSuperposition::phi(int m) {
  if (m < 1) throw std::invalid_argument("phi target needs m >= 1");
  std::vector<Complex> d(static_cast<std::size_t>(m) + 1, 0.0);
  d.front() = d.back() = 1.0 / std::sqrt(2.0);
  return TargetSuperposition(std::move(d));
}

int TargetSuperposition::top_excitation() const {
  for (int m = m_max(); m > 0; --m) {
    if (std::abs(d_[static_cast<std::size_t>(m)]) > kNegligible) return m;
  }
  return 0;
}

StateVector TargetSuperposition::as_state(const BasisPtr& basis) const {
  auto state = StateVector::zero(basis);
  CVector amps = state.amplitudes();
  for (int m = 0; m <= m_max(); ++m) {
    const Complex d = d_[static_cast<std::size_t>(m)];
    if (d == Complex(0.0)) continue;
    amps(static_cast<Eigen::Index>(basis->index(m, 0, Level::kG))) = d;
  }
  return {basis, std::move(amps)};
}

// ---------------------------------------------------------------------------

Complex resonance_omega_anc(int m, int n_atoms, Complex omega_r) {
  if (m < 1 || m > n_atoms) {
    throw std::invalid_argument("resonance_omega_anc needs 1 <= m <= N");
  }
  return omega_r * std::sqrt(static_cast<double>(m) / (n_atoms - m + 1));
}

double effective_rabi(int m, int n_atoms, Complex omega_r, double delta_e) {
  if (delta_e == 0.0) throw std::invalid_argument("effective_rabi needs delta_e != 0");
  if (m < 1 || m > n_atoms) throw std::invalid_argument("effective_rabi needs 1 <= m <= N");
  const double n_m = n_atoms - m + 1;
  return std::norm(omega_r) * m / (2.0 * std::abs(delta_e) * (n_m + 1.0));
}

void DriveSettings::validate() const {
  if (!(omega_r > 0.0) || !std::isfinite(omega_r)) throw std::invalid_argument("omega_r must be > 0");
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw std::invalid_argument("omega_c must be > 0");
  if (delta_e == 0.0 || !std::isfinite(delta_e)) throw std::invalid_argument("delta_e must be finite and != 0");
}

PulseSegment raman_segment(int m, int n_atoms, const DriveSettings& drive, double duration,
                           double phase) {
  PulseSegment seg;
  seg.omega_r = std::polar(drive.omega_r, phase);
  seg.omega_anc = resonance_omega_anc(m, n_atoms, drive.omega_r);
  seg.delta_e = drive.delta_e;
  seg.duration = duration;
  return seg;
}

PulseSegment flip_segment(const DriveSettings& drive, double duration, double phase) {
  PulseSegment seg;
  seg.omega_c = std::polar(drive.omega_c, phase);
  seg.duration = duration;
  return seg;
}

PulseSequence plan_fock(int m_target, int n_atoms, const DriveSettings& drive) {
  if (m_target < 0 || m_target > n_atoms) throw std::invalid_argument("plan_fock needs 0 <= m <= N");
  drive.validate();
  PulseSequence seq;
  for (int m = 1; m <= m_target; ++m) {
    seq.append(SegmentKind::kAncillaFlip, m, flip_segment(drive, kPi / drive.omega_c));
    const double rabi = effective_rabi(m, n_atoms, drive.omega_r, drive.delta_e);
    seq.append(SegmentKind::kRaman, m, raman_segment(m, n_atoms, drive, kPi / rabi));
  }
  return seq;
}

// ---------------------------------------------------------------------------

IdealLadder::IdealLadder(int n_atoms, int m_max)
    : n_atoms_(n_atoms),
      m_max_(m_max),
      basis_(build_basis(n_atoms, m_max, 1)),
      ops_(make_operators(basis_)) {
  ladder_.reserve(static_cast<std::size_t>(dimension()));
  ladder_.push_back(psi_g(basis_, 0).amplitudes());
  for (int m = 1; m <= m_max; ++m) {
    const auto trio = dark_state_trio(basis_, m);
    ladder_.push_back(trio.psi_s.amplitudes());
    ladder_.push_back(trio.psi_g.amplitudes());
    excited_.push_back(trio.psi_e.amplitudes());
  }
}

CMatrix IdealLadder::hamiltonian(SegmentKind kind, const PulseSegment& segment) const {
  if (kind == SegmentKind::kMapping) {
    throw std::invalid_argument("mapping segments leave the dark-state ladder");
  }
  const CMatrix h = hermitian_drive(ops_, segment).matrix();
  const int dim = dimension();
  CMatrix p(h.rows(), dim);
  for (int i = 0; i < dim; ++i) p.col(i) = ladder_[static_cast<std::size_t>(i)];

  CMatrix out = p.adjoint() * h * p;
  if (segment.delta_e != 0.0) {
    for (const auto& e : excited_) {
      const CVector coupling = p.adjoint() * (h * e);  // <L_a|H|e>
      out -= coupling * coupling.adjoint() / segment.delta_e;
    }
  }
  return out;
}

CMatrix IdealLadder::propagator(SegmentKind kind, const PulseSegment& segment) const {
  const CMatrix a = hamiltonian(kind, segment) * Complex(0.0, -segment.duration);
  return a.exp();
}

CVector IdealLadder::apply(const PulseSequence& sequence, const CVector& initial) const {
  if (initial.size() != dimension()) throw std::invalid_argument("ladder vector has wrong size");
  CVector x = initial;
  for (const auto& step : sequence.steps()) x = propagator(step.kind, step.segment) * x;
  return x;
}

CVector IdealLadder::embed(const TargetSuperposition& target) const {
  if (target.m_max() > m_max_) throw std::invalid_argument("target exceeds the ladder");
  CVector x = CVector::Zero(dimension());
  for (int m = 0; m <= target.m_max(); ++m) {
    x(index_g(m)) = target.coefficients()[static_cast<std::size_t>(m)];
  }
  return x;
}

PulseSequence plan_superposition(const TargetSuperposition& target, int n_atoms,
                                 const DriveSettings& drive) {
  drive.validate();
  const int m_top = target.top_excitation();
  if (m_top > n_atoms) throw std::invalid_argument("target excitation exceeds N");
  PulseSequence seq;
  if (m_top == 0) return seq;

  const IdealLadder ladder(n_atoms, m_top);
  std::vector<Complex> d(target.coefficients().begin(),
                         target.coefficients().begin() + m_top + 1);
  CVector x = ladder.embed(TargetSuperposition::normalized(d));

  std::vector<AnnotatedSegment> backwards;
  auto undo = [&](SegmentKind kind, int rung, const PulseSegment& seg, int q) {
    const CMatrix back = (ladder.hamiltonian(kind, seg) * Complex(0.0, seg.duration)).exp();
    x = back * x;
    if (std::abs(x(q)) > 1e-12 * std::max(1.0, x.norm())) {
      std::ostringstream msg;
      msg << "back-solve failed to empty ladder slot " << q << " (residual " << std::abs(x(q)) << ")";
      throw std::logic_error(msg.str());
    }
    backwards.push_back({kind, rung, seg});
  };

  for (int m = m_top; m >= 1; --m) {
    {
      const int p = IdealLadder::index_s(m);
      const int q = IdealLadder::index_g(m);
      const CMatrix h0 = ladder.hamiltonian(SegmentKind::kRaman, raman_segment(m, n_atoms, drive, 1.0));
      const CMatrix h1 =
          ladder.hamiltonian(SegmentKind::kRaman, raman_segment(m, n_atoms, drive, 1.0, kPi / 2.0));
      const double shift = std::abs(h0(p, p) - h0(q, q));
      if (shift > 1e-10 * std::abs(h0(p, q))) {
        throw std::logic_error("two-photon resonance condition violated on the ladder");
      }
      const auto rot = solve_rotation(h0(p, q), h1(p, q), x(p), x(q));
      undo(SegmentKind::kRaman, m, raman_segment(m, n_atoms, drive, rot.duration, rot.phase), q);
    }
    {
      const int p = IdealLadder::index_g(m - 1);
      const int q = IdealLadder::index_s(m);
      const CMatrix h0 = ladder.hamiltonian(SegmentKind::kAncillaFlip, flip_segment(drive, 1.0));
      const CMatrix h1 =
          ladder.hamiltonian(SegmentKind::kAncillaFlip, flip_segment(drive, 1.0, kPi / 2.0));
      const auto rot = solve_rotation(h0(p, q), h1(p, q), x(p), x(q));
      undo(SegmentKind::kAncillaFlip, m, flip_segment(drive, rot.duration, rot.phase), q);
    }
  }

  for (auto it = backwards.rbegin(); it != backwards.rend(); ++it) {
    seq.append(it->kind, it->rung, it->segment);
  }
  return seq;
}

// ---------------------------------------------------------------------------

double optimal_detuning(const PhysicalParams& params, DetuningMode mode, double cap) {
  params.validate();
  if (mode == DetuningMode::kDeterministic) return std::sqrt(params.gamma_star * params.gamma_1d);
  if (!(cap > 0.0)) throw std::invalid_argument("detuning cap must be positive");
  return std::min(params.n_atoms * params.gamma_1d, cap * params.gamma_1d);
}

PulseSegment mapping_pulse(double omega_r_fast) {
  if (!(omega_r_fast > 0.0) || !std::isfinite(omega_r_fast)) {
    throw std::invalid_argument("mapping pulse needs a positive Rabi frequency");
  }
  PulseSegment seg;
  seg.omega_r = omega_r_fast;
  seg.duration = kPi / omega_r_fast;
  return seg;
}

std::optional<std::string> mapping_pulse_warning(double omega_r_fast, int n_atoms) {
  if (omega_r_fast >= 10.0 * n_atoms) return std::nullopt;
  std::ostringstream msg;
  msg << "mapping pulse Omega_r = " << omega_r_fast << " is below 10 N Gamma_1D = " << 10.0 * n_atoms
      << "; superradiant decay during the pulse will be significant";
  return msg.str();
}

PulseSegment parking_flip(double omega_c) {
  if (!(omega_c > 0.0)) throw std::invalid_argument("parking flip needs omega_c > 0");
  PulseSegment seg;
  seg.omega_c = omega_c;
  seg.duration = kPi / omega_c;
  return seg;
}

// ---------------------------------------------------------------------------

DriveSettings ProtocolSettings::drive_for(const PhysicalParams& params) const {
  if (!(raman_ratio > 0.0)) throw std::invalid_argument("raman_ratio must be > 0");
  DriveSettings drive;
  drive.delta_e = delta_e.value_or(optimal_detuning(params));
  drive.omega_r = raman_ratio * std::abs(drive.delta_e);
  drive.omega_c = omega_c;
  drive.validate();
  return drive;
}

SimulationResult simulate_target(const TargetSuperposition& target, const PhysicalParams& params,
                                 const ProtocolSettings& settings) {
  params.validate();
  const auto drive = settings.drive_for(params);
  const auto sequence = plan_superposition(target, params.n_atoms, drive);
  const auto basis = build_basis(params.n_atoms, target.m_max(), settings.k_max);

  SimulationResult out;
  out.trajectory = run_sequence(sequence, psi_g(basis, 0), params);
  const auto goal = target.as_state(basis);
  const auto& final_state = out.trajectory.final_state();
  out.fidelity = fidelity(final_state, goal);
  out.fidelity_renormalized = fidelity_renormalized(final_state, goal);
  out.delta_e = drive.delta_e;
  out.omega_r = drive.omega_r;
  out.total_time = sequence.total_duration();
  out.segments = sequence.size();
  return out;
}

SimulationResult simulate_raman_step(int m, const PhysicalParams& params,
                                     const ProtocolSettings& settings) {
  params.validate();
  const auto drive = settings.drive_for(params);
  const auto basis = build_basis(params.n_atoms, m, settings.k_max);
  const auto trio = dark_state_trio(basis, m);
  const double rabi = effective_rabi(m, params.n_atoms, drive.omega_r, drive.delta_e);

  PulseSequence seq;
  seq.append(SegmentKind::kAncillaFlip, m, flip_segment(drive, 0.0));
  seq.append(SegmentKind::kRaman, m, raman_segment(m, params.n_atoms, drive, kPi / rabi));

  SimulationResult out;
  out.trajectory = run_sequence(seq, trio.psi_s, params);
  const auto& final_state = out.trajectory.final_state();
  out.fidelity = fidelity(final_state, trio.psi_g);
  out.fidelity_renormalized = fidelity_renormalized(final_state, trio.psi_g);
  out.delta_e = drive.delta_e;
  out.omega_r = drive.omega_r;
  out.total_time = seq.total_duration();
  out.segments = seq.size();
  return out;
}

ConvergenceReport k_max_convergence(const TargetSuperposition& target, const PhysicalParams& params,
                                    const ProtocolSettings& settings) {
  ProtocolSettings doubled = settings;
  doubled.k_max = std::max(1, 2 * settings.k_max);
  return {simulate_target(target, params, settings).fidelity,
          simulate_target(target, params, doubled).fidelity};
}

}  // namespace dfsphoton
