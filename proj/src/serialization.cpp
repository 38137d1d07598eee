#include "dfsphoton/serialization.hpp"

#include <stdexcept>
#include <string>

namespace dfsphoton {

namespace {

std::string model_name(ErrorModel model) {
  return model == ErrorModel::kDeterministic ? "deterministic" : "post-selected";
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("expected a number or a [re, im] pair, got " + j.dump());
}

Json to_json(const PulseSegment& segment) {
  Json j;
  j["omega_r"] = complex_to_json(segment.omega_r);
  j["omega_anc"] = complex_to_json(segment.omega_anc);
  j["omega_c"] = complex_to_json(segment.omega_c);
  j["delta_e"] = segment.delta_e;
  j["duration"] = segment.duration;
  return j;
}

Json to_json(const PulseSequence& sequence) {
  Json segments = Json::array();
  for (const auto& step : sequence.steps()) {
    Json s;
    s["kind"] = std::string(to_string(step.kind));
    s["rung"] = step.rung;
    const Json fields = to_json(step.segment);
    for (const auto& [key, value] : fields.items()) s[key] = value;
    segments.push_back(std::move(s));
  }
  Json j;
  j["total_duration"] = sequence.total_duration();
  j["segments"] = std::move(segments);
  return j;
}

PulseSequence sequence_from_json(const Json& j) {
  const Json& segments = j.is_array() ? j : j.at("segments");
  PulseSequence seq;
  for (const auto& s : segments) {
    PulseSegment seg;
    seg.omega_r = complex_from_json(s.value("omega_r", Json(0.0)));
    seg.omega_anc = complex_from_json(s.value("omega_anc", Json(0.0)));
    seg.omega_c = complex_from_json(s.value("omega_c", Json(0.0)));
    seg.delta_e = s.value("delta_e", 0.0);
    seg.duration = s.at("duration").get<double>();
    seq.append(segment_kind_from_string(s.at("kind").get<std::string>()), s.value("rung", 0), seg);
  }
  return seq;
}

Json to_json(const PhysicalParams& params) {
  Json j;
  j["n_atoms"] = params.n_atoms;
  j["gamma_1d"] = params.gamma_1d;
  j["gamma_star"] = params.gamma_star;
  j["purcell"] = params.purcell();
  return j;
}

Json to_json(const TargetSuperposition& target) {
  Json d = Json::array();
  for (const auto& c : target.coefficients()) d.push_back(complex_to_json(c));
  Json j;
  j["m_max"] = target.m_max();
  j["coefficients"] = std::move(d);
  return j;
}

Json to_json(const ErrorBudget& b) {
  Json j;
  j["model"] = model_name(b.model);
  j["m"] = b.m;
  j["n_atoms"] = b.n_atoms;
  j["omega_r"] = b.omega_r;
  j["delta_e"] = b.delta_e;
  j["gamma_star"] = b.gamma_star;
  j["eps_psi_e"] = b.eps_psi_e;
  j["eps_chi_s"] = b.eps_chi_s;
  j["eps_chi_g"] = b.eps_chi_g;
  j["total_rate"] = b.total_rate();
  j["effective_rabi"] = b.effective_rabi;
  j["t_op"] = b.t_op;
  j["per_step_infidelity"] = b.per_step_infidelity;
  return j;
}

Json to_json(const TotalInfidelities& t) {
  Json j;
  j["m_max"] = t.m_max;
  j["delta_opt"] = t.delta_opt;
  j["one_minus_f1"] = t.one_minus_f1;
  j["one_minus_f2"] = t.one_minus_f2;
  j["single_mode_overlap"] = t.single_mode_overlap;
  j["combined_fidelity"] = t.combined_fidelity;
  return j;
}

Json to_json(const WaveguideSpec& s) {
  Json j;
  j["group_index"] = s.group_index;
  j["mode_area_um2"] = s.mode_area_um2;
  j["lambda0_um"] = s.lambda0_um;
  j["cavity_factor"] = s.cavity_factor;
  j["refractive_index"] = s.refractive_index;
  j["quality_factor"] = s.quality_factor;
  j["gamma_a_per_s"] = s.gamma_a;
  j["alpha"] = s.alpha;
  return j;
}

Json to_json(const PurcellReport& r) {
  Json j;
  j["cross_section_um2"] = r.cross_section_um2;
  j["purcell_ratio"] = r.ratio;
  j["p1d"] = r.p1d;
  return j;
}

Json to_json(const PropagationReport& r) {
  Json j;
  j["lambda_a_um"] = r.lambda_a_um;
  j["l_prop_over_lambda_a"] = r.l_prop_over_lambda_a;
  j["group_velocity_m_per_s"] = r.group_velocity;
  j["gamma_1d_per_s"] = r.gamma_1d;
  j["spacing_um"] = r.spacing_um;
  j["n_max"] = r.n_max;
  j["eps_prop"] = r.eps_prop;
  return j;
}

Json to_json(const SimulationResult& r) {
  Json j;
  j["fidelity"] = r.fidelity;
  j["fidelity_renormalized"] = r.fidelity_renormalized;
  j["infidelity"] = r.infidelity();
  j["delta_e"] = r.delta_e;
  j["omega_r"] = r.omega_r;
  j["total_time"] = r.total_time;
  j["segments"] = r.segments;
  j["segment_times"] = r.trajectory.times;
  j["norm_history"] = r.trajectory.squared_norms;
  return j;
}

}  // namespace dfsphoton
