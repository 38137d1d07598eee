#pragma once

// Multi-photon output of a decaying superradiant state |S_m>: exact and
// linearized (Holstein-Primakoff) spectral amplitudes, quadrature grids,
// normalization and single-mode overlaps. Detunings delta = omega - omega_a
// are in units of Gamma_1D; the coupling constant lives in the grid weights.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dfsphoton/state_space.hpp"

namespace dfsphoton {

class TargetSuperposition;

inline constexpr int kMaxExactPhotons = 8;
inline constexpr int kMaxGridPhotons = 5;

enum class GridKind { kTangent, kUniform };

/// Symmetric 1-D quadrature over delta. Weights carry Gamma_1D d(omega)/(2 pi),
/// so sum_j w_j |C(delta_j)|^2 approximates 1 for the single-photon line.
class FrequencyGrid {
 public:
  /// Midpoint rule in theta with delta = (N/2) tan(theta), theta in (-pi/2, pi/2).
  /// Integrates the Lorentzian line exactly; `points` must be odd.
  static FrequencyGrid tangent(int n_atoms, std::size_t points);
  /// Trapezoid rule on [-span, span] with span = span_halfwidths * N/2.
  static FrequencyGrid uniform(int n_atoms, std::size_t points, double span_halfwidths = 50.0);
  /// Tangent grid with the default point count for m photons.
  static FrequencyGrid default_for(int photons, int n_atoms);
  static std::size_t default_points(int photons);

  /// Same kind and span with about half the points, for refinement checks.
  FrequencyGrid coarsened() const;

  GridKind kind() const { return kind_; }
  int n_atoms() const { return n_atoms_; }
  std::size_t size() const { return detunings_.size(); }
  const std::vector<double>& detunings() const { return detunings_; }
  const std::vector<double>& weights() const { return weights_; }
  double span_halfwidths() const { return span_halfwidths_; }

  /// Emission time t; amplitudes pick up exp(-i sum delta t).
  double emission_time() const { return emission_time_; }
  FrequencyGrid with_emission_time(double t) const;

 private:
  FrequencyGrid() = default;
  GridKind kind_ = GridKind::kTangent;
  int n_atoms_ = 1;
  double span_halfwidths_ = 0.0;
  double emission_time_ = 0.0;
  std::vector<double> detunings_;
  std::vector<double> weights_;
};

/// Sum over the m! orderings of prod_r i sqrt(r N_r) / (i sum_{l<=r} delta_l + r N_r / 2),
/// N_r = N - r + 1. With `linearized` every N_r is replaced by N.
Complex amplitude_exact(std::span<const double> detunings, int n_atoms, bool linearized = false);

/// The identity-ordering term of amplitude_exact.
Complex amplitude_ordered(std::span<const double> detunings, int n_atoms);

/// sqrt(m!) prod_r C(delta_r), C(delta) = i sqrt(N) / (i delta + N/2).
Complex amplitude_hp(std::span<const double> detunings, int n_atoms);

struct ClosedOverlap {
  double overlap = 1.0;
  double one_minus = 0.0;  ///< evaluated without cancellation
};

/// 2^m prod_r sqrt(N N_r) / (N + N_r).
ClosedOverlap overlap_hp_closed(int photons, int n_atoms);

struct NumericOverlap {
  Complex value;               ///< quadrature of sum A*_exact A_HP / m!
  double refinement_delta = 0.0;  ///< |value - value on the coarsened grid|
};

/// Quadrature of the exact/HP overlap on grid^m. Throws std::runtime_error
/// when the coarsened-grid estimate moves by more than max_refinement_delta.
NumericOverlap overlap_hp_numeric(int photons, int n_atoms, const FrequencyGrid& grid,
                                  double max_refinement_delta = 1e-3);

enum class AmplitudeModel { kExact, kHolsteinPrimakoff };

/// m-photon spectral amplitude on grid^m. Tensors are stored when they hold at
/// most kMaxStoredAmplitudes entries; larger ones are evaluated on demand.
class WavepacketGrid {
 public:
  static constexpr std::size_t kMaxStoredAmplitudes = std::size_t{1} << 22;

  WavepacketGrid(int photons, int n_atoms, FrequencyGrid grid,
                 AmplitudeModel model = AmplitudeModel::kExact, Complex scale = 1.0);

  int photons() const { return photons_; }
  int n_atoms() const { return n_atoms_; }
  const FrequencyGrid& grid() const { return grid_; }
  AmplitudeModel model() const { return model_; }
  Complex scale() const { return scale_; }
  std::size_t point_count() const { return point_count_; }
  bool stored() const { return !values_.empty(); }

  /// Amplitude at a multi-index (one grid index per photon), including scale
  /// and emission-time phase.
  Complex amplitude(std::span<const std::size_t> index) const;
  /// Flat row-major index variant.
  Complex amplitude_flat(std::size_t flat) const;

  /// sum prod w |A|^2 / m!, using permutation symmetry of the amplitude.
  double squared_norm() const;

  /// CSV with one row per grid point: delta_1..delta_m, weight, Re A, Im A, |A|^2.
  void write_csv(std::ostream& out) const;

 private:
  Complex evaluate(std::span<const std::size_t> index) const;

  int photons_;
  int n_atoms_;
  FrequencyGrid grid_;
  AmplitudeModel model_;
  Complex scale_;
  std::size_t point_count_;
  std::vector<Complex> values_;
};

struct SuperpositionOutput {
  std::vector<WavepacketGrid> components;  ///< m = 1..m_max with d_m != 0 (vacuum omitted)
  std::vector<int> photon_numbers;
  double vacuum_weight = 0.0;              ///< |d_0|^2
  double single_mode_fidelity = 1.0;       ///< sum_m |d_m|^2 overlap_hp_closed(m, N)
};

/// Photon-number components weighted by d_m. Components use
/// FrequencyGrid::default_for(m, N) unless a grid is supplied.
SuperpositionOutput superposition_output(const TargetSuperposition& target, int n_atoms,
                                         const std::optional<FrequencyGrid>& grid = std::nullopt);

}  // namespace dfsphoton
