#include "dfsphoton/full_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace dfsphoton {

namespace {

using Triplet = Eigen::Triplet<Complex>;

int digit(Eigen::Index index, int site) {
  for (int i = 0; i < site; ++i) index /= 3;
  return static_cast<int>(index % 3);
}

Eigen::Index power3(int n) {
  Eigen::Index p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return p;
}

}  // namespace

FullSpace::FullSpace(int n_atoms) : n_atoms_(n_atoms), dim_(0) {
  if (n_atoms < 1 || n_atoms > kFullSpaceMaxAtoms) {
    throw std::invalid_argument("full space supports 1 <= N <= " +
                                std::to_string(kFullSpaceMaxAtoms) + ", got " +
                                std::to_string(n_atoms));
  }
  dim_ = power3(n_atoms + 1);
}

SparseCMatrix FullSpace::site_operator(int site, Level to, Level from) const {
  if (site < 0 || site > n_atoms_) throw std::out_of_range("site index out of range");
  const Eigen::Index stride = power3(site);
  const int f = static_cast<int>(from);
  const int t = static_cast<int>(to);
  std::vector<Triplet> entries;
  for (Eigen::Index col = 0; col < dim_; ++col) {
    if (digit(col, site) != f) continue;
    entries.emplace_back(col + (t - f) * stride, col, 1.0);
  }
  SparseCMatrix op(dim_, dim_);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseCMatrix FullSpace::register_sum(Level to, Level from) const {
  SparseCMatrix sum(dim_, dim_);
  for (int n = 0; n < n_atoms_; ++n) sum += site_operator(n, to, from);
  return sum;
}

SparseCMatrix FullSpace::collective_lower() const {
  SparseCMatrix lower = register_sum(Level::kG, Level::kE);
  lower += site_operator(ancilla_site(), Level::kG, Level::kE);
  return lower;
}

SparseCMatrix FullSpace::excited_count() const {
  SparseCMatrix count = register_sum(Level::kE, Level::kE);
  count += site_operator(ancilla_site(), Level::kE, Level::kE);
  return count;
}

SparseCMatrix FullSpace::h_eff(const PulseSegment& segment, const PhysicalParams& params) const {
  segment.validate();
  params.validate();
  if (params.n_atoms != n_atoms_) throw std::invalid_argument("params.n_atoms does not match");

  const int a = ancilla_site();
  SparseCMatrix drive = register_sum(Level::kS, Level::kE) * (segment.omega_r / 2.0);
  drive += site_operator(a, Level::kS, Level::kE) * (segment.omega_anc / 2.0);
  drive += site_operator(a, Level::kS, Level::kG) * (segment.omega_c / 2.0);

  const SparseCMatrix lower = collective_lower();
  const SparseCMatrix count = excited_count();
  const SparseCMatrix raise = lower.adjoint();
  const Complex i(0.0, 1.0);

  SparseCMatrix h = drive;
  h += SparseCMatrix(drive.adjoint());
  h += count * Complex(segment.delta_e);
  h -= SparseCMatrix(raise * lower) * (i * params.gamma_1d / 2.0);
  h -= count * (i * params.gamma_star / 2.0);
  return h;
}

CMatrix FullSpace::isometry(const SymmetricBasis& basis) const {
  if (basis.n_atoms() != n_atoms_) throw std::invalid_argument("basis N does not match");
  CMatrix v = CMatrix::Zero(dim_, static_cast<Eigen::Index>(basis.dimension()));
  for (Eigen::Index idx = 0; idx < dim_; ++idx) {
    int m = 0;
    int k = 0;
    for (int n = 0; n < n_atoms_; ++n) {
      const int level = digit(idx, n);
      m += level == static_cast<int>(Level::kS) ? 1 : 0;
      k += level == static_cast<int>(Level::kE) ? 1 : 0;
    }
    const auto anc = static_cast<Level>(digit(idx, ancilla_site()));
    if (auto col = basis.find(m, k, anc)) {
      v(idx, static_cast<Eigen::Index>(*col)) = 1.0 / std::sqrt(multinomial_norm(n_atoms_, m, k));
    }
  }
  return v;
}

CVector FullSpace::embed(const StateVector& state) const {
  return isometry(*state.basis()) * state.amplitudes();
}

StateVector FullSpace::project(const CVector& full, const BasisPtr& basis) const {
  if (full.size() != dim_) throw std::invalid_argument("full-space vector has wrong size");
  return {basis, isometry(*basis).adjoint() * full};
}

// ---------------------------------------------------------------------------

double OracleResult::pure_fidelity(const StateVector& target) const {
  const FullSpace space(n_atoms);
  return std::abs(space.embed(target).dot(full_state));
}

double OracleResult::master_fidelity(const StateVector& target) const {
  if (density.size() == 0) throw std::logic_error("master equation was not run");
  const FullSpace space(n_atoms);
  const CVector t = space.embed(target);
  const Complex value = t.dot(density * t);
  return std::sqrt(std::max(0.0, value.real()));
}

namespace {

using DensityState = std::vector<Complex>;

// d rho / dt = -i (H rho - rho H^dagger) + sum_j L_j rho L_j^dagger. rho stays
// Hermitian, so rho H^dagger = (H rho)^dagger and L rho L^dagger = L (L rho)^dagger.
struct Lindblad {
  SparseCMatrix h;
  std::vector<SparseCMatrix> jumps;
  Eigen::Index dim;

  void operator()(const DensityState& x, DensityState& dxdt, double /*t*/) const {
    Eigen::Map<const CMatrix> rho(x.data(), dim, dim);
    Eigen::Map<CMatrix> out(dxdt.data(), dim, dim);
    const CMatrix h_rho = h * rho;
    out = Complex(0.0, -1.0) * h_rho;
    out += Complex(0.0, 1.0) * h_rho.adjoint();
    for (const auto& jump : jumps) {
      const CMatrix l_rho = jump * rho;
      out += jump * l_rho.adjoint();
    }
  }
};

}  // namespace

OracleResult full_space_oracle(const PulseSequence& sequence, const PhysicalParams& params,
                               const StateVector& initial, const OracleOptions& options) {
  params.validate();
  if (params.n_atoms > kFullSpaceMaxAtoms) {
    throw std::invalid_argument("full_space_oracle supports N <= 4");
  }
  const FullSpace space(params.n_atoms);
  const Eigen::Index dim = space.dimension();

  OracleResult result{space.embed(initial), StateVector::zero(initial.basis()), 0.0, CMatrix(), 0};
  result.n_atoms = params.n_atoms;

  Lindblad lindblad;
  lindblad.dim = dim;
  if (options.master_equation) {
    lindblad.jumps.push_back(space.collective_lower() * Complex(std::sqrt(params.gamma_1d)));
    for (int n = 0; n <= params.n_atoms; ++n) {
      lindblad.jumps.push_back(space.site_operator(n, Level::kG, Level::kE) *
                               Complex(std::sqrt(params.gamma_star)));
    }
  }

  DensityState rho(static_cast<std::size_t>(dim * dim));
  if (options.master_equation) {
    Eigen::Map<CMatrix>(rho.data(), dim, dim) = result.full_state * result.full_state.adjoint();
  }

  namespace odeint = boost::numeric::odeint;
  for (const auto& step : sequence.steps()) {
    const SparseCMatrix h = space.h_eff(step.segment, params);
    const double t = step.segment.duration;
    result.full_state = evolve_vector(CMatrix(h), t, result.full_state);
    if (options.master_equation && t > 0.0) {
      lindblad.h = h;
      auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                             odeint::runge_kutta_dopri5<DensityState>());
      odeint::integrate_adaptive(stepper, lindblad, rho, 0.0, t, std::min(t, 1e-2));
    }
  }

  result.projected = space.project(result.full_state, initial.basis());
  result.leakage = (result.full_state - space.embed(result.projected)).norm();
  if (options.master_equation) result.density = Eigen::Map<CMatrix>(rho.data(), dim, dim);
  return result;
}

}  // namespace dfsphoton
