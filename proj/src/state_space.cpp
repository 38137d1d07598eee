#include "dfsphoton/state_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dfsphoton {

namespace {

constexpr int kLevels = 3;

std::size_t table_slot(int m, int k, Level a, int k_max) {
  return (static_cast<std::size_t>(m) * static_cast<std::size_t>(k_max + 1) +
          static_cast<std::size_t>(k)) *
             kLevels +
         static_cast<std::size_t>(a);
}

void require_excitation(const BasisPtr& basis, int m) {
  if (m < 1) {
    throw std::invalid_argument("dark states need m >= 1, got " + std::to_string(m));
  }
  if (m > basis->m_max()) {
    throw std::invalid_argument("m = " + std::to_string(m) + " exceeds basis m_max = " +
                                std::to_string(basis->m_max()));
  }
}

}  // namespace

SymmetricBasis::SymmetricBasis(int n_atoms, int m_max, int k_max)
    : n_atoms_(n_atoms), m_max_(m_max), k_max_(k_max) {
  lookup_.assign(static_cast<std::size_t>(m_max + 1) * static_cast<std::size_t>(k_max + 1) *
                     kLevels,
                 -1);
  for (int m = 0; m <= m_max; ++m) {
    for (int k = 0; k <= k_max; ++k) {
      if (m + k > n_atoms) continue;
      for (int a = 0; a < kLevels; ++a) {
        const auto level = static_cast<Level>(a);
        lookup_[table_slot(m, k, level, k_max)] = static_cast<std::ptrdiff_t>(labels_.size());
        labels_.push_back({m, k, level});
      }
    }
  }
}

std::optional<std::size_t> SymmetricBasis::find(int m, int k, Level a) const {
  if (m < 0 || k < 0 || m > m_max_ || k > k_max_) return std::nullopt;
  const auto slot = lookup_[table_slot(m, k, a, k_max_)];
  if (slot < 0) return std::nullopt;
  return static_cast<std::size_t>(slot);
}

std::size_t SymmetricBasis::index(int m, int k, Level a) const {
  if (auto found = find(m, k, a)) return *found;
  throw std::out_of_range("basis has no state (m=" + std::to_string(m) +
                          ", k=" + std::to_string(k) +
                          ", a=" + std::to_string(static_cast<int>(a)) + ")");
}

BasisPtr build_basis(int n_atoms, int m_max, int k_max) {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  if (m_max < 0 || k_max < 0) throw std::invalid_argument("m_max and k_max must be >= 0");
  if (m_max > n_atoms) {
    throw std::invalid_argument("m_max = " + std::to_string(m_max) + " exceeds n_atoms = " +
                                std::to_string(n_atoms));
  }
  BasisPtr basis(new SymmetricBasis(n_atoms, m_max, k_max));
  if (basis->dimension() == 0) throw std::invalid_argument("empty basis");
  return basis;
}

double multinomial_norm(int n_atoms, int m, int k) {
  if (m < 0 || k < 0 || m + k > n_atoms) {
    throw std::invalid_argument("multinomial_norm needs 0 <= m, k and m + k <= N");
  }
  // C(N, m) * C(N - m, k); each partial product is itself an integer.
  long double value = 1.0L;
  for (int i = 1; i <= m; ++i) value = value * (n_atoms - m + i) / i;
  const int rest = n_atoms - m;
  for (int i = 1; i <= k; ++i) value = value * (rest - k + i) / i;
  return static_cast<double>(value);
}

// ---------------------------------------------------------------------------

StateVector::StateVector(BasisPtr basis, CVector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw std::invalid_argument("StateVector needs a basis");
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension()) {
    throw std::invalid_argument("amplitude count does not match basis dimension");
  }
}

StateVector StateVector::zero(BasisPtr basis) {
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  return {std::move(basis), CVector::Zero(dim)};
}

StateVector StateVector::basis_state(BasisPtr basis, int m, int k, Level a) {
  const auto i = basis->index(m, k, a);
  auto state = zero(std::move(basis));
  state.amplitudes_(static_cast<Eigen::Index>(i)) = 1.0;
  return state;
}

Complex StateVector::amplitude(int m, int k, Level a) const {
  if (auto i = basis_->find(m, k, a)) return amplitudes_(static_cast<Eigen::Index>(*i));
  return 0.0;
}

Complex StateVector::inner(const StateVector& other) const {
  if (basis_ != other.basis_) throw std::invalid_argument("states live on different bases");
  return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------

Operator::Operator(BasisPtr basis, CMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (!basis_) throw std::invalid_argument("Operator needs a basis");
  const auto dim = static_cast<Eigen::Index>(basis_->dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("operator matrix does not match basis dimension");
  }
}

Operator Operator::zero(BasisPtr basis) {
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  return {std::move(basis), CMatrix::Zero(dim, dim)};
}

void Operator::require_same_basis(const Operator& rhs) const {
  if (basis_ != rhs.basis_) throw std::invalid_argument("operators live on different bases");
}

StateVector Operator::apply(const StateVector& state) const {
  if (state.basis() != basis_) throw std::invalid_argument("state and operator bases differ");
  return {basis_, matrix_ * state.amplitudes()};
}

Complex Operator::expectation(const StateVector& state) const {
  if (state.basis() != basis_) throw std::invalid_argument("state and operator bases differ");
  return state.amplitudes().dot(matrix_ * state.amplitudes());
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_basis(rhs);
  return {basis_, matrix_ * rhs.matrix_};
}

Operator Operator::operator+(const Operator& rhs) const {
  require_same_basis(rhs);
  return {basis_, matrix_ + rhs.matrix_};
}

Operator Operator::operator-(const Operator& rhs) const {
  require_same_basis(rhs);
  return {basis_, matrix_ - rhs.matrix_};
}

// ---------------------------------------------------------------------------

Operator collective_lower(const BasisPtr& basis) {
  auto op = Operator::zero(basis);
  CMatrix mat = op.matrix();
  const int n = basis->n_atoms();
  for (std::size_t col = 0; col < basis->dimension(); ++col) {
    const auto [m, k, a] = basis->label(col);
    if (k > 0) {
      // Lowering stays inside the basis: (m, k-1) is admissible whenever (m, k) is.
      const auto row = basis->index(m, k - 1, a);
      mat(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
          std::sqrt(static_cast<double>(k) * (n - m - k + 1));
    }
    if (a == Level::kE) {
      const auto row = basis->index(m, k, Level::kG);
      mat(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += 1.0;
    }
  }
  return {basis, std::move(mat)};
}

DriveOperators drive_operators(const BasisPtr& basis) {
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  CMatrix reg_se = CMatrix::Zero(dim, dim);
  CMatrix anc_se = CMatrix::Zero(dim, dim);
  CMatrix anc_sg = CMatrix::Zero(dim, dim);
  CMatrix count = CMatrix::Zero(dim, dim);

  for (std::size_t col = 0; col < basis->dimension(); ++col) {
    const auto [m, k, a] = basis->label(col);
    const auto c = static_cast<Eigen::Index>(col);
    // |F_{m,k}> -> sqrt((m+1) k) |F_{m+1,k-1}>; dropped if (m+1) leaves the basis.
    if (k > 0) {
      if (auto row = basis->find(m + 1, k - 1, a)) {
        reg_se(static_cast<Eigen::Index>(*row), c) = std::sqrt(static_cast<double>((m + 1) * k));
      }
    }
    if (a == Level::kE) {
      anc_se(static_cast<Eigen::Index>(basis->index(m, k, Level::kS)), c) = 1.0;
    }
    if (a == Level::kG) {
      anc_sg(static_cast<Eigen::Index>(basis->index(m, k, Level::kS)), c) = 1.0;
    }
    count(c, c) = k + (a == Level::kE ? 1 : 0);
  }
  return {Operator(basis, std::move(reg_se)), Operator(basis, std::move(anc_se)),
          Operator(basis, std::move(anc_sg)), Operator(basis, std::move(count))};
}

DickeOperators make_operators(const BasisPtr& basis) {
  auto lower = collective_lower(basis);
  auto decay = lower.adjoint() * lower;
  return {basis, std::move(lower), std::move(decay), drive_operators(basis)};
}

StateVector psi_g(const BasisPtr& basis, int m) {
  return StateVector::basis_state(basis, m, 0, Level::kG);
}

DarkStateTrio dark_state_trio(const BasisPtr& basis, int m) {
  require_excitation(basis, m);
  if (basis->k_max() < 1) throw std::invalid_argument("dark states need k_max >= 1");

  const double n_m = basis->n_atoms() - m + 1;
  auto psi_e = StateVector::zero(basis);
  CVector amps = psi_e.amplitudes();
  amps(static_cast<Eigen::Index>(basis->index(m - 1, 0, Level::kE))) =
      std::sqrt(n_m / (n_m + 1.0));
  amps(static_cast<Eigen::Index>(basis->index(m - 1, 1, Level::kG))) = -std::sqrt(1.0 / (n_m + 1.0));

  return {StateVector::basis_state(basis, m - 1, 0, Level::kS), psi_g(basis, m),
          StateVector(basis, std::move(amps))};
}

SuperradiantPair superradiant_pair(const BasisPtr& basis, int m) {
  require_excitation(basis, m);
  if (basis->k_max() < 1) throw std::invalid_argument("superradiant states need k_max >= 1");

  const double n_m = basis->n_atoms() - m + 1;
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
  amps(static_cast<Eigen::Index>(basis->index(m - 1, 0, Level::kE))) = std::sqrt(1.0 / (n_m + 1.0));
  amps(static_cast<Eigen::Index>(basis->index(m - 1, 1, Level::kG))) = std::sqrt(n_m / (n_m + 1.0));

  SuperradiantPair pair{std::nullopt, StateVector(basis, std::move(amps))};
  if (m >= 2) pair.chi_s = StateVector::basis_state(basis, m - 2, 1, Level::kS);
  return pair;
}

}  // namespace dfsphoton
