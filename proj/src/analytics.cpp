#include "dfsphoton/analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dfsphoton/photonics.hpp"
#include "dfsphoton/protocol.hpp"

namespace dfsphoton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

ErrorBudget error_rates(int m, int n_atoms, double omega_r, double delta_e,
                        const PhysicalParams& params, ErrorModel model) {
  params.validate();
  if (delta_e == 0.0) throw std::invalid_argument("error_rates needs delta_e != 0");
  if (m < 1 || m > n_atoms) throw std::invalid_argument("error_rates needs 1 <= m <= N");

  const double n = n_atoms;
  const double n_m = n - m + 1.0;
  const double gs = params.gamma_star;
  const double drive = m * omega_r * omega_r;
  const double d2 = delta_e * delta_e;
  const double collective = gs + n * params.gamma_1d;
  const double denom = d2 + collective * collective;
  const double prefactor = model == ErrorModel::kDeterministic ? collective : gs;

  ErrorBudget b;
  b.m = m;
  b.n_atoms = n_atoms;
  b.omega_r = omega_r;
  b.delta_e = delta_e;
  b.gamma_star = gs;
  b.model = model;
  b.eps_psi_e = gs * drive / (4.0 * (n_m + 1.0) * (d2 + gs * gs));
  b.eps_chi_s = prefactor * drive / (4.0 * n * n * denom);
  b.eps_chi_g = prefactor * drive / (4.0 * denom) + prefactor * drive / (4.0 * n * denom);
  b.effective_rabi = effective_rabi(m, n_atoms, omega_r, delta_e);
  b.t_op = kPi / b.effective_rabi;
  b.per_step_infidelity = b.t_op * b.total_rate();
  return b;
}

double asymptotic_step_infidelity(double delta_e, const PhysicalParams& params) {
  params.validate();
  require_positive(delta_e, "delta_e");
  return kPi / 2.0 * (params.gamma_star / delta_e + delta_e / params.gamma_1d);
}

double asymptotic_step_infidelity_post_selected(double delta_e, const PhysicalParams& params) {
  params.validate();
  require_positive(delta_e, "delta_e");
  const double collective = params.n_atoms * params.gamma_1d;
  return kPi * params.n_atoms * params.gamma_star / 2.0 *
         (1.0 / delta_e + delta_e / (collective * collective));
}

double main_text_eps1(int m, double omega_r, double delta_e, const PhysicalParams& params) {
  params.validate();
  return params.gamma_star * m * omega_r * omega_r / (4.0 * params.n_atoms * delta_e * delta_e);
}

double main_text_eps2(int m, double omega_r, double delta_e, const PhysicalParams& params) {
  params.validate();
  const double collective = params.n_atoms * params.gamma_1d;
  return collective * m * omega_r * omega_r / (4.0 * (delta_e * delta_e + collective * collective));
}

TotalInfidelities total_infidelities(int m_max, const PhysicalParams& params) {
  params.validate();
  if (m_max < 0 || m_max > params.n_atoms) throw std::invalid_argument("total_infidelities needs 0 <= m_max <= N");
  TotalInfidelities t;
  t.m_max = m_max;
  t.delta_opt = optimal_detuning(params);
  if (m_max > 0) {
    // Omega_r cancels between t_op and the rates; any positive value works.
    const double step = error_rates(1, params.n_atoms, 1e-3 * t.delta_opt, t.delta_opt, params)
                            .per_step_infidelity;
    t.one_minus_f1 = m_max * step;
  }
  t.one_minus_f2 = static_cast<double>(m_max) * m_max * params.gamma_star /
                   (params.n_atoms * params.gamma_1d);
  t.single_mode_overlap = overlap_hp_closed(m_max, params.n_atoms).overlap;
  t.combined_fidelity = (1.0 - t.one_minus_f1) * (1.0 - t.one_minus_f2) * t.single_mode_overlap;
  return t;
}

WaveguideSpec WaveguideSpec::cs_sin() {
  WaveguideSpec s;
  s.group_index = 10.0;
  s.mode_area_um2 = 0.2;
  s.lambda0_um = 0.894;
  s.cavity_factor = 5.0;
  s.refractive_index = 2.0;
  s.quality_factor = 1e6;
  s.gamma_a = 2.0 * kPi * 5.02e6;
  s.alpha = 1.0;
  return s;
}

void WaveguideSpec::validate() const {
  require_positive(group_index, "group_index");
  require_positive(mode_area_um2, "mode_area_um2");
  require_positive(lambda0_um, "lambda0_um");
  require_positive(cavity_factor, "cavity_factor");
  require_positive(refractive_index, "refractive_index");
  require_positive(quality_factor, "quality_factor");
  require_positive(gamma_a, "gamma_a");
  require_positive(alpha, "alpha");
}

PurcellReport purcell_ratio(const WaveguideSpec& spec) {
  spec.validate();
  PurcellReport r;
  r.cross_section_um2 = 3.0 * spec.lambda0_um * spec.lambda0_um / (2.0 * kPi);
  r.ratio = spec.cavity_factor * spec.group_index * r.cross_section_um2 / (2.0 * spec.mode_area_um2);
  r.p1d = r.ratio / spec.alpha;
  return r;
}

PropagationReport propagation_and_retardation(const WaveguideSpec& spec, int n_atoms,
                                              double gamma_1d_ratio,
                                              double spacing_over_lambda_a) {
  spec.validate();
  require_positive(gamma_1d_ratio, "gamma_1d_ratio");
  require_positive(spacing_over_lambda_a, "spacing_over_lambda_a");
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");

  PropagationReport r;
  r.lambda_a_um = spec.lambda0_um / spec.refractive_index;
  r.l_prop_over_lambda_a = spec.quality_factor / (2.0 * kPi * spec.group_index);
  r.group_velocity = kSpeedOfLight / spec.group_index;
  r.gamma_1d = gamma_1d_ratio * spec.gamma_a;
  r.spacing_um = spacing_over_lambda_a * r.lambda_a_um;
  // N Gamma_1D < v_g / (N d), with d in metres.
  r.n_max = std::sqrt(r.group_velocity / (r.gamma_1d * r.spacing_um * 1e-6));
  r.eps_prop = n_atoms / r.l_prop_over_lambda_a;
  return r;
}

}  // namespace dfsphoton
