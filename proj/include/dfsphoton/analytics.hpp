#pragma once

// Closed-form error budgets and feasibility estimates. Rates are in units of
// Gamma_1D unless a field says otherwise.

#include "dfsphoton/dynamics.hpp"

namespace dfsphoton {

enum class ErrorModel { kDeterministic, kPostSelected };

struct ErrorBudget {
  int m = 1;
  int n_atoms = 1;
  double omega_r = 0.0;
  double delta_e = 0.0;
  double gamma_star = 0.0;
  ErrorModel model = ErrorModel::kDeterministic;

  double eps_psi_e = 0.0;  ///< emission of Psi_e^(m) into other modes
  double eps_chi_s = 0.0;  ///< leakage through chi_s^(m)
  double eps_chi_g = 0.0;  ///< leakage through chi_g^(m)
  double effective_rabi = 0.0;
  double t_op = 0.0;       ///< pi / |Omega^(m)|, units 1/Gamma_1D
  double per_step_infidelity = 0.0;

  double total_rate() const { return eps_psi_e + eps_chi_s + eps_chi_g; }
};

/// Full (non-asymptotic) rates for step m. In post-selected mode the
/// N Gamma_1D prefactors of the chi terms are replaced by Gamma*.
ErrorBudget error_rates(int m, int n_atoms, double omega_r, double delta_e,
                        const PhysicalParams& params,
                        ErrorModel model = ErrorModel::kDeterministic);

/// (pi/2)(Gamma*/Delta_e + Delta_e/Gamma_1D)
double asymptotic_step_infidelity(double delta_e, const PhysicalParams& params);
/// (pi N Gamma*/2)(1/Delta_e + Delta_e/(N Gamma_1D)^2)
double asymptotic_step_infidelity_post_selected(double delta_e, const PhysicalParams& params);

/// Main-text leading-order rates, kept for comparison with the full forms:
/// eps_1 = Gamma* m |Omega_r|^2 / (4 N Delta_e^2),
/// eps_2 = N Gamma_1D m |Omega_r|^2 / (4 (Delta_e^2 + (N Gamma_1D)^2)).
double main_text_eps1(int m, double omega_r, double delta_e, const PhysicalParams& params);
double main_text_eps2(int m, double omega_r, double delta_e, const PhysicalParams& params);

struct TotalInfidelities {
  int m_max = 0;
  double delta_opt = 0.0;
  double one_minus_f1 = 0.0;        ///< m_max * per-step infidelity at Delta_opt
  double one_minus_f2 = 0.0;        ///< m_max^2 Gamma* / (N Gamma_1D)
  double single_mode_overlap = 1.0; ///< overlap_hp_closed(m_max, N)
  double combined_fidelity = 1.0;   ///< F1 F2 overlap
};

TotalInfidelities total_infidelities(int m_max, const PhysicalParams& params);

/// Photonic-crystal waveguide description. Lengths in micrometres, Gamma_a in
/// rad/s.
struct WaveguideSpec {
  double group_index = 10.0;
  double mode_area_um2 = 0.2;
  double lambda0_um = 0.894;
  double cavity_factor = 5.0;
  double refractive_index = 2.0;
  double quality_factor = 1e6;
  double gamma_a = 0.0;      ///< free-space decay rate, rad/s
  double alpha = 1.0;        ///< Gamma* / Gamma_a

  static WaveguideSpec cs_sin();
  void validate() const;
};

struct PurcellReport {
  double cross_section_um2 = 0.0;  ///< 3 lambda0^2 / (2 pi)
  double ratio = 0.0;              ///< Gamma_1D / Gamma_a
  double p1d = 0.0;                ///< ratio / alpha
};

PurcellReport purcell_ratio(const WaveguideSpec& spec);

struct PropagationReport {
  double lambda_a_um = 0.0;        ///< lambda0 / n_r
  double l_prop_over_lambda_a = 0.0;  ///< Q / (2 pi n_g)
  double group_velocity = 0.0;     ///< m/s
  double gamma_1d = 0.0;           ///< rad/s
  double spacing_um = 0.0;
  double n_max = 0.0;              ///< largest N with N^2 Gamma_1D d / v_g < 1
  double eps_prop = 0.0;           ///< N lambda_a / L_prop
};

/// gamma_1d_ratio is Gamma_1D / Gamma_a; spacing is in units of lambda_a.
PropagationReport propagation_and_retardation(const WaveguideSpec& spec, int n_atoms,
                                              double gamma_1d_ratio,
                                              double spacing_over_lambda_a = 0.5);

}  // namespace dfsphoton
