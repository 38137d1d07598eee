#include "dfsphoton/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dfsphoton/protocol.hpp"
#include "dfsphoton/report.hpp"

namespace dfsphoton {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_photons(std::size_t m, std::size_t limit, const char* what) {
  if (m < 1 || m > limit) {
    throw std::invalid_argument(std::string(what) + ": photon number must be in 1.." +
                                std::to_string(limit));
  }
}

// Advances a multi-index in row-major order; false once it wraps around.
bool advance(std::vector<std::size_t>& idx, std::size_t points) {
  for (std::size_t pos = idx.size(); pos-- > 0;) {
    if (++idx[pos] < points) return true;
    idx[pos] = 0;
  }
  return false;
}

// Next non-decreasing multi-index.
bool advance_sorted(std::vector<std::size_t>& idx, std::size_t points) {
  for (std::size_t pos = idx.size(); pos-- > 0;) {
    if (idx[pos] + 1 < points) {
      const std::size_t v = idx[pos] + 1;
      for (std::size_t j = pos; j < idx.size(); ++j) idx[j] = v;
      return true;
    }
  }
  return false;
}

// Number of distinct orderings of a sorted multi-index.
double orderings(const std::vector<std::size_t>& sorted) {
  double count = factorial(static_cast<int>(sorted.size()));
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      count /= factorial(static_cast<int>(run));
      run = 1;
    }
  }
  return count;
}

Complex ordered_term(std::span<const double> det, int n_atoms, bool linearized) {
  Complex product = 1.0;
  double partial = 0.0;
  for (std::size_t i = 0; i < det.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    const double n_r = linearized ? n_atoms : n_atoms - r + 1.0;
    partial += det[i];
    product *= kI * std::sqrt(r * n_r) / (kI * partial + r * n_r / 2.0);
  }
  return product;
}

Complex line_shape(double delta, int n_atoms) {
  return kI * std::sqrt(static_cast<double>(n_atoms)) / (kI * delta + n_atoms / 2.0);
}

}  // namespace

// ---------------------------------------------------------------------------

FrequencyGrid FrequencyGrid::tangent(int n_atoms, std::size_t points) {
  if (n_atoms < 1) throw std::invalid_argument("grid needs n_atoms >= 1");
  if (points < 3 || points % 2 == 0) throw std::invalid_argument("tangent grid needs an odd point count >= 3");
  FrequencyGrid g;
  g.kind_ = GridKind::kTangent;
  g.n_atoms_ = n_atoms;
  const double half_width = n_atoms / 2.0;
  const double dtheta = kPi / static_cast<double>(points);
  g.detunings_.resize(points);
  g.weights_.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    // Index from the centre outwards so the grid is exactly symmetric.
    const double offset = static_cast<double>(j) - static_cast<double>(points / 2);
    const double theta = offset * dtheta;
    const double sec = 1.0 / std::cos(theta);
    g.detunings_[j] = half_width * std::tan(theta);
    g.weights_[j] = half_width * sec * sec * dtheta / (2.0 * kPi);
  }
  g.detunings_[points / 2] = 0.0;
  g.span_halfwidths_ = std::abs(g.detunings_.front()) / half_width;
  return g;
}

FrequencyGrid FrequencyGrid::uniform(int n_atoms, std::size_t points, double span_halfwidths) {
  if (n_atoms < 1) throw std::invalid_argument("grid needs n_atoms >= 1");
  if (points < 3 || points % 2 == 0) throw std::invalid_argument("uniform grid needs an odd point count >= 3");
  if (!(span_halfwidths > 0.0)) throw std::invalid_argument("grid span must be positive");
  FrequencyGrid g;
  g.kind_ = GridKind::kUniform;
  g.n_atoms_ = n_atoms;
  g.span_halfwidths_ = span_halfwidths;
  const double span = span_halfwidths * n_atoms / 2.0;
  const double step = 2.0 * span / static_cast<double>(points - 1);
  g.detunings_.resize(points);
  g.weights_.assign(points, step / (2.0 * kPi));
  for (std::size_t j = 0; j < points; ++j) {
    g.detunings_[j] = (static_cast<double>(j) - static_cast<double>(points / 2)) * step;
  }
  g.weights_.front() *= 0.5;
  g.weights_.back() *= 0.5;
  return g;
}

std::size_t FrequencyGrid::default_points(int photons) {
  switch (photons) {
    case 1: return 4097;
    case 2: return 2049;
    case 3: return 257;
    case 4: return 49;
    case 5: return 25;
    default: break;
  }
  throw std::invalid_argument("default grids exist for 1..5 photons");
}

FrequencyGrid FrequencyGrid::default_for(int photons, int n_atoms) {
  return tangent(n_atoms, default_points(photons));
}

FrequencyGrid FrequencyGrid::coarsened() const {
  std::size_t points = (size() + 1) / 2;
  if (points % 2 == 0) ++points;
  points = std::max<std::size_t>(points, 3);
  FrequencyGrid g = kind_ == GridKind::kTangent ? tangent(n_atoms_, points)
                                                 : uniform(n_atoms_, points, span_halfwidths_);
  g.emission_time_ = emission_time_;
  return g;
}

FrequencyGrid FrequencyGrid::with_emission_time(double t) const {
  if (!std::isfinite(t)) throw std::invalid_argument("emission time must be finite");
  FrequencyGrid g = *this;
  g.emission_time_ = t;
  return g;
}

// ---------------------------------------------------------------------------

Complex amplitude_exact(std::span<const double> detunings, int n_atoms, bool linearized) {
  require_photons(detunings.size(), kMaxExactPhotons, "amplitude_exact");
  if (static_cast<int>(detunings.size()) > n_atoms) {
    throw std::invalid_argument("amplitude_exact: more photons than atoms");
  }
  std::vector<std::size_t> perm(detunings.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> ordered(detunings.size());
  Complex total = 0.0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) ordered[i] = detunings[perm[i]];
    total += ordered_term(ordered, n_atoms, linearized);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Complex amplitude_ordered(std::span<const double> detunings, int n_atoms) {
  require_photons(detunings.size(), kMaxExactPhotons, "amplitude_ordered");
  if (static_cast<int>(detunings.size()) > n_atoms) {
    throw std::invalid_argument("amplitude_ordered: more photons than atoms");
  }
  return ordered_term(detunings, n_atoms, false);
}

Complex amplitude_hp(std::span<const double> detunings, int n_atoms) {
  if (detunings.empty()) throw std::invalid_argument("amplitude_hp needs at least one photon");
  if (n_atoms < 1) throw std::invalid_argument("amplitude_hp needs n_atoms >= 1");
  Complex product = std::sqrt(factorial(static_cast<int>(detunings.size())));
  for (double d : detunings) product *= line_shape(d, n_atoms);
  return product;
}

ClosedOverlap overlap_hp_closed(int photons, int n_atoms) {
  if (photons < 0 || photons > n_atoms) throw std::invalid_argument("overlap needs 0 <= m <= N");
  // Each factor 2 sqrt(x)/(1+x), x = N_r/N = 1-u, summed in log form.
  double log_overlap = 0.0;
  for (int r = 1; r <= photons; ++r) {
    const double u = static_cast<double>(r - 1) / n_atoms;
    log_overlap += 0.5 * std::log1p(-u) - std::log1p(-u / 2.0);
  }
  return {std::exp(log_overlap), -std::expm1(log_overlap)};
}

NumericOverlap overlap_hp_numeric(int photons, int n_atoms, const FrequencyGrid& grid,
                                  double max_refinement_delta) {
  require_photons(static_cast<std::size_t>(std::max(photons, 0)), kMaxGridPhotons, "overlap_hp_numeric");
  if (photons > n_atoms) throw std::invalid_argument("overlap_hp_numeric: more photons than atoms");
  if (grid.n_atoms() != n_atoms) throw std::invalid_argument("grid was built for a different N");

  auto quadrature = [&](const FrequencyGrid& g) {
    const std::size_t points = g.size();
    std::vector<Complex> shape(points);
    for (std::size_t j = 0; j < points; ++j) shape[j] = line_shape(g.detunings()[j], n_atoms);
    const double root_fact = std::sqrt(factorial(photons));

    std::vector<std::size_t> idx(static_cast<std::size_t>(photons), 0);
    std::vector<double> det(idx.size());
    Complex sum = 0.0;
    do {
      double weight = 1.0;
      Complex hp = root_fact;
      for (std::size_t r = 0; r < idx.size(); ++r) {
        det[r] = g.detunings()[idx[r]];
        weight *= g.weights()[idx[r]];
        hp *= shape[idx[r]];
      }
      // A_HP is symmetric, so one ordering of A_exact carries the m! orderings.
      sum += weight * std::conj(ordered_term(det, n_atoms, false)) * hp;
    } while (advance(idx, points));
    return sum;
  };

  NumericOverlap out;
  out.value = quadrature(grid);
  out.refinement_delta = std::abs(out.value - quadrature(grid.coarsened()));
  if (out.refinement_delta > max_refinement_delta) {
    throw std::runtime_error("overlap_hp_numeric: grid too coarse (refinement moves the result by " +
                             format_number(out.refinement_delta) + ")");
  }
  return out;
}

// ---------------------------------------------------------------------------

WavepacketGrid::WavepacketGrid(int photons, int n_atoms, FrequencyGrid grid, AmplitudeModel model,
                               Complex scale)
    : photons_(photons),
      n_atoms_(n_atoms),
      grid_(std::move(grid)),
      model_(model),
      scale_(scale),
      point_count_(1) {
  require_photons(static_cast<std::size_t>(std::max(photons, 0)), kMaxGridPhotons, "WavepacketGrid");
  if (photons > n_atoms) throw std::invalid_argument("WavepacketGrid: more photons than atoms");
  if (grid_.n_atoms() != n_atoms) throw std::invalid_argument("grid was built for a different N");
  for (int r = 0; r < photons; ++r) point_count_ *= grid_.size();

  if (point_count_ <= kMaxStoredAmplitudes) {
    values_.resize(point_count_);
    std::vector<std::size_t> idx(static_cast<std::size_t>(photons), 0);
    std::size_t flat = 0;
    do {
      values_[flat++] = evaluate(idx);
    } while (advance(idx, grid_.size()));
  }
}

Complex WavepacketGrid::evaluate(std::span<const std::size_t> index) const {
  if (index.size() != static_cast<std::size_t>(photons_)) {
    throw std::invalid_argument("multi-index length must equal the photon number");
  }
  std::vector<double> det(index.size());
  double total = 0.0;
  for (std::size_t r = 0; r < index.size(); ++r) {
    det[r] = grid_.detunings().at(index[r]);
    total += det[r];
  }
  const Complex base = model_ == AmplitudeModel::kExact ? amplitude_exact(det, n_atoms_)
                                                        : amplitude_hp(det, n_atoms_);
  return scale_ * base * std::polar(1.0, -total * grid_.emission_time());
}

Complex WavepacketGrid::amplitude(std::span<const std::size_t> index) const {
  if (values_.empty()) return evaluate(index);
  std::size_t flat = 0;
  for (std::size_t r : index) {
    if (r >= grid_.size()) throw std::out_of_range("grid index out of range");
    flat = flat * grid_.size() + r;
  }
  if (index.size() != static_cast<std::size_t>(photons_)) {
    throw std::invalid_argument("multi-index length must equal the photon number");
  }
  return values_[flat];
}

Complex WavepacketGrid::amplitude_flat(std::size_t flat) const {
  if (flat >= point_count_) throw std::out_of_range("flat grid index out of range");
  if (!values_.empty()) return values_[flat];
  std::vector<std::size_t> idx(static_cast<std::size_t>(photons_));
  for (std::size_t r = idx.size(); r-- > 0;) {
    idx[r] = flat % grid_.size();
    flat /= grid_.size();
  }
  return evaluate(idx);
}

double WavepacketGrid::squared_norm() const {
  std::vector<std::size_t> idx(static_cast<std::size_t>(photons_), 0);
  const double inv_fact = 1.0 / factorial(photons_);
  double sum = 0.0;
  do {
    double weight = 1.0;
    for (std::size_t r : idx) weight *= grid_.weights()[r];
    sum += orderings(idx) * weight * std::norm(amplitude(idx));
  } while (advance_sorted(idx, grid_.size()));
  return sum * inv_fact;
}

void WavepacketGrid::write_csv(std::ostream& out) const {
  for (int r = 1; r <= photons_; ++r) out << "delta_" << r << "[gamma_1d],";
  out << "weight[dimensionless],re_A[dimensionless],im_A[dimensionless],abs2_A[dimensionless]\n";
  std::vector<std::size_t> idx(static_cast<std::size_t>(photons_), 0);
  const double inv_fact = 1.0 / factorial(photons_);
  do {
    double weight = inv_fact;
    for (std::size_t r : idx) {
      out << format_number(grid_.detunings()[r]) << ',';
      weight *= grid_.weights()[r];
    }
    const Complex a = amplitude(idx);
    out << format_number(weight) << ',' << format_number(a.real()) << ',' << format_number(a.imag())
        << ',' << format_number(std::norm(a)) << '\n';
  } while (advance(idx, grid_.size()));
}

// ---------------------------------------------------------------------------

SuperpositionOutput superposition_output(const TargetSuperposition& target, int n_atoms,
                                         const std::optional<FrequencyGrid>& grid) {
  if (target.m_max() > n_atoms) throw std::invalid_argument("target has more excitations than atoms");
  SuperpositionOutput out;
  out.single_mode_fidelity = 0.0;
  const auto& d = target.coefficients();
  for (int m = 0; m <= target.m_max(); ++m) {
    const double p = std::norm(d[static_cast<std::size_t>(m)]);
    out.single_mode_fidelity += p * overlap_hp_closed(m, n_atoms).overlap;
    if (m == 0) {
      out.vacuum_weight = p;
      continue;
    }
    if (p <= 1e-28) continue;
    if (m > kMaxGridPhotons) throw std::invalid_argument("wavepacket grids support up to 5 photons");
    out.components.emplace_back(m, n_atoms, grid ? *grid : FrequencyGrid::default_for(m, n_atoms),
                                AmplitudeModel::kExact, d[static_cast<std::size_t>(m)]);
    out.photon_numbers.push_back(m);
  }
  return out;
}

}  // namespace dfsphoton
