#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "dfsphoton/dynamics.hpp"
#include "dfsphoton/protocol.hpp"
#include "test_support.hpp"

using namespace dfsphoton;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

PhysicalParams params_for(int n, double gamma_star) {
  PhysicalParams p;
  p.n_atoms = n;
  p.gamma_star = gamma_star;
  return p;
}

}  // namespace

TEST(PhysicalParams, PurcellRoundTrip) {
  const auto p = PhysicalParams::from_purcell(10, 1e4);
  EXPECT_DOUBLE_EQ(p.purcell() * p.gamma_star, p.gamma_1d);
  EXPECT_DOUBLE_EQ(p.gamma_star, 1e-4);
  EXPECT_THROW(PhysicalParams::from_purcell(10, 0.0), std::invalid_argument);
  EXPECT_THROW(PhysicalParams::from_purcell(0, 10.0), std::invalid_argument);
  PhysicalParams bad;
  bad.gamma_1d = 2.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(HEff, DiagonalElementsOfGroundAncillaSector) {
  const int n = 9;
  const auto basis = build_basis(n, 3, 2);
  PulseSegment seg;
  seg.delta_e = 0.37;
  const auto params = params_for(n, 0.013);
  const auto h = build_h_eff(basis, seg, params);
  for (int m = 0; m <= 3; ++m) {
    for (int k = 0; k <= 2; ++k) {
      const auto i = basis->index(m, k, Level::kG);
      const Complex expected =
          k * seg.delta_e - kI * static_cast<double>(k) * ((n - m - k + 1) / 2.0 + params.gamma_star / 2.0);
      EXPECT_NEAR(std::abs(h.element(i, i) - expected), 0.0, 1e-13) << m << "," << k;
    }
  }
}

TEST(HEff, PureDecayIsAntiHermitian) {
  const auto basis = build_basis(5, 2, 2);
  const auto h = build_h_eff(basis, PulseSegment{}, params_for(5, 0.01)).matrix();
  EXPECT_LT((h + h.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::SelfAdjointEigenSolver<CMatrix> es((h - h.adjoint()) / (2.0 * kI));
  EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-12);
}

TEST(HEff, AncillaRegisterDecayCrossTerm) {
  const int n = 3;
  const auto basis = build_basis(n, 1, 1);
  const auto h = build_h_eff(basis, PulseSegment{}, params_for(n, 1e-3));
  const Complex el = h.element(basis->index(0, 1, Level::kG), basis->index(0, 0, Level::kE));
  EXPECT_NEAR(std::abs(el - (-kI * std::sqrt(3.0) / 2.0)), 0.0, 1e-15);
}

TEST(HEff, MatchesProductSpaceConstruction) {
  const int n = 3;
  const auto basis = build_basis(n, n, n);
  PulseSegment seg{Complex(0.3, -0.2), Complex(-0.1, 0.4), Complex(0.25, 0.05), 0.7, 1.0};
  const auto params = params_for(n, 0.02);
  const dfsphoton::testing::ProductSpace space{n + 1};
  using dfsphoton::testing::sigma;
  const CMatrix lower = space.sum_over(0, n + 1, Level::kG, Level::kE);
  CMatrix drive = seg.omega_r / 2.0 * space.sum_over(0, n, Level::kS, Level::kE) +
                  seg.omega_anc / 2.0 * space.on_site(n, sigma(Level::kS, Level::kE)) +
                  seg.omega_c / 2.0 * space.on_site(n, sigma(Level::kS, Level::kG));
  const CMatrix see = space.sum_over(0, n + 1, Level::kE, Level::kE);
  const CMatrix h_full = drive + drive.adjoint() + seg.delta_e * see -
                         kI / 2.0 * lower.adjoint() * lower - kI * params.gamma_star / 2.0 * see;
  const CMatrix v = dfsphoton::testing::symmetric_columns(*basis);
  const auto h = build_h_eff(basis, seg, params).matrix();
  EXPECT_LT((v.adjoint() * h_full * v - h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HEff, RejectsMismatchedAtomNumber) {
  const auto basis = build_basis(4, 1, 1);
  EXPECT_THROW(build_h_eff(basis, PulseSegment{}, params_for(5, 0.01)), std::invalid_argument);
}

TEST(Evolve, ZeroDurationIsIdentity) {
  const auto basis = build_basis(4, 2, 2);
  PulseSegment seg{0.1, 0.2, 0.3, 0.4, 0.0};
  const auto h = build_h_eff(basis, seg, params_for(4, 0.01));
  std::mt19937_64 rng(dfsphoton::testing::kSeed);
  const StateVector psi(basis, dfsphoton::testing::random_state(rng, static_cast<Eigen::Index>(basis->dimension())));
  EXPECT_EQ(evolve(psi, h, 0.0).amplitudes(), psi.amplitudes());
}

TEST(Evolve, SuperradiantSingleExcitationDecay) {
  const auto basis = build_basis(4, 1, 2);
  const auto h = build_h_eff(basis, PulseSegment{}, params_for(4, 1e-12));
  // Ancilla in s: it has no e partner, so |F_{0,1}>|s> decays at rate N.
  const auto out = evolve(StateVector::basis_state(basis, 0, 1, Level::kS), h, 0.1);
  EXPECT_NEAR(std::abs(out.amplitude(0, 1, Level::kS)), std::exp(-0.2), 1e-9);
  EXPECT_NEAR(std::exp(-0.2), 0.81873, 1e-5);
}

TEST(Evolve, AncillaInGroundSharesTheDecayChannel) {
  // |F_{0,1}>|g> and |F_{0,0}>|e> form a 2x2 block with decay matrix
  // [[N, sqrt(N)], [sqrt(N), 1]]: one bright mode at N+1, one dark mode.
  const int n = 4;
  const auto basis = build_basis(n, 1, 2);
  const auto h = build_h_eff(basis, PulseSegment{}, params_for(n, 1e-12));
  const auto out = evolve(StateVector::basis_state(basis, 0, 1, Level::kG), h, 0.1);
  const double expected = (n * std::exp(-(n + 1) * 0.1 / 2.0) + 1.0) / (n + 1);
  EXPECT_NEAR(std::abs(out.amplitude(0, 1, Level::kG)), expected, 1e-9);
  EXPECT_NEAR(std::abs(out.amplitude(0, 0, Level::kE)),
              std::sqrt(static_cast<double>(n)) * (1.0 - std::exp(-(n + 1) * 0.1 / 2.0)) / (n + 1), 1e-9);
}

TEST(Evolve, MicrowavePiPulseFlipsAncilla) {
  const auto basis = build_basis(3, 1, 1);
  PulseSegment seg;
  seg.omega_c = 0.8;
  const auto h = build_h_eff(basis, seg, params_for(3, 1e-3));
  const auto out = evolve(StateVector::basis_state(basis, 1, 0, Level::kG), h, kPi / 0.8);
  EXPECT_NEAR(std::abs(out.amplitude(1, 0, Level::kS) - (-kI)), 0.0, 1e-10);
}

TEST(Evolve, MatchesDirectExponential) {
  const auto basis = build_basis(6, 3, 2);
  PulseSegment seg{0.05, 0.02, 0.4, 0.3, 0.0};
  const auto h = build_h_eff(basis, seg, params_for(6, 0.01));
  std::mt19937_64 rng(7);
  const StateVector psi(basis, dfsphoton::testing::random_state(rng, static_cast<Eigen::Index>(basis->dimension())));
  const double t = 37.5;
  const CMatrix u = (h.matrix() * Complex(0.0, -t)).exp();
  EXPECT_LT((evolve(psi, h, t, 1e-12).amplitudes() - u * psi.amplitudes()).norm(), 1e-10);
  EXPECT_THROW(evolve(psi, h, -1.0), std::invalid_argument);
}

TEST(RunSequence, EmptySequenceKeepsInitialState) {
  const auto basis = build_basis(5, 1, 1);
  const auto traj = run_sequence(PulseSequence{}, psi_g(basis, 0), params_for(5, 0.01));
  ASSERT_EQ(traj.snapshots.size(), 1u);
  EXPECT_EQ(traj.times, std::vector<double>{0.0});
  EXPECT_EQ(traj.final_state().amplitudes(), psi_g(basis, 0).amplitudes());
}

TEST(RunSequence, SinglePhotonFockPlanAtHighPurcell) {
  const auto params = PhysicalParams::from_purcell(10, 1e6);
  const auto r = simulate_target(TargetSuperposition::fock(1), params);
  EXPECT_GT(r.fidelity, 0.99);
  EXPECT_TRUE(r.trajectory.norm_non_increasing());
  EXPECT_LE(r.trajectory.squared_norms.back(), 1.0 + 1e-12);
}

TEST(Fidelity, Definitions) {
  const auto basis = build_basis(4, 2, 1);
  const auto target = psi_g(basis, 2);
  EXPECT_NEAR(fidelity(target, target), 1.0, 1e-15);
  EXPECT_EQ(fidelity(psi_g(basis, 1), target), 0.0);
  const StateVector damped(basis, target.amplitudes() * 0.9);
  EXPECT_NEAR(fidelity(damped, target), 0.9, 1e-15);
  EXPECT_NEAR(fidelity_renormalized(damped, target), 1.0, 1e-15);
  EXPECT_THROW(fidelity_renormalized(StateVector::zero(basis), target), std::invalid_argument);
}

TEST(HEff, ExcitationNumberBlockStructure) {
  const int n = 5;
  const auto basis = build_basis(n, 3, 2);
  const Eigen::Index dim = static_cast<Eigen::Index>(basis->dimension());
  CMatrix count = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& l = basis->label(static_cast<std::size_t>(i));
    count(i, i) = l.m + l.k + (l.ancilla != Level::kG ? 1 : 0);
  }
  PulseSegment no_flip{0.3, 0.2, 0.0, 0.5, 1.0};
  const auto h0 = build_h_eff(basis, no_flip, params_for(n, 0.01)).matrix();
  EXPECT_LT((h0 * count - count * h0).cwiseAbs().maxCoeff(), 1e-13);

  PulseSegment flip{0.0, 0.0, 0.7, 0.0, 1.0};
  const auto h1 = build_h_eff(basis, flip, params_for(n, 0.01)).matrix();
  const auto bare = build_h_eff(basis, PulseSegment{}, params_for(n, 0.01)).matrix();
  const CMatrix off = h1 - bare;
  EXPECT_GT(off.cwiseAbs().maxCoeff(), 0.3);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (std::abs(off(i, j)) > 0.0) {
        EXPECT_EQ(std::abs(count(i, i) - count(j, j)), 1.0);
      }
    }
  }
}
